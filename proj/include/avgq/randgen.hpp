#pragma once

#include <cstdint>
#include <vector>

#include "avgq/report.hpp"
#include "avgq/rng.hpp"
#include "avgq/truth_table.hpp"

namespace avgq {

// Uniform member of B_{n,m}, the n-variable functions of weight m.
TruthTable sample_fixed_weight(int n, std::uint64_t m, std::uint64_t seed);
TruthTable sample_fixed_weight(int n, std::uint64_t m, Rng& rng);

// Weight trajectory t_0 = m, t_1, ..., t_k of a uniform f in B_{n,m} along a
// fixed path, drawn round by round: t_j black points survive among t_{j-1}
// items taken without replacement from 2^(n-j) agreeing and 2^(n-j)
// disagreeing inputs. Needs no table, so n may reach 62.
struct BoxProcessTrace {
  int n = 0;
  std::uint64_t m = 0;
  PathSpec path;
  std::vector<std::uint64_t> t;
};

inline constexpr int kMaxBoxVars = 62;

BoxProcessTrace box_process(int n, std::uint64_t m, const PathSpec& path, std::uint64_t seed);
BoxProcessTrace box_process(int n, std::uint64_t m, const PathSpec& path, Rng& rng);

// True when child/parent lies in [(1-delta)/2, (1+delta)/2]; false for a zero
// parent.
bool ratio_in_window(std::uint64_t parent, std::uint64_t child, double delta);

// Every step of the path keeps the weight ratio within the window. A zero
// weight before the last step makes the path fail.
bool is_delta_parity_path(const TruthTable& f, const PathSpec& path, double delta);

// Every path of length at most t is a delta-parity path. Checks each
// (restriction, one more variable) pair with at most t-1 fixed variables once.
bool is_t_delta_parity(const TruthTable& f, int t, double delta);

struct Lemma36Params {
  int n = 60;
  std::uint64_t m = std::uint64_t{1} << 30;
  double epsilon = 0.5;
  double delta = 1.0 / 30;
  int path_len = 15;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
};

// 2 eps log2(m) exp(-delta^2 m^(1-eps) / 2).
double lemma36_bound(std::uint64_t m, double epsilon, double delta);

// Frequency of box-process traces that leave the window in some round, against
// lemma36_bound plus three binomial standard errors.
ExperimentReport lemma36_experiment(const Lemma36Params& params);

struct Theorem12Params {
  int n = 14;
  std::uint64_t m = std::uint64_t{1} << 13;
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  int t = 3;
  double delta = 1.0 / 6;
};

// log2(m/log2 n) - 3 log2 log2(m/log2 n) - 5.
double theorem12_threshold(int n, std::uint64_t m);

// Distribution of min_certificate over sampled f in B_{n,m}, the threshold
// (vacuous when not positive), and the check that every (t, delta)-parity
// sample has min_certificate >= t.
ExperimentReport theorem12_harness(const Theorem12Params& params);

}  // namespace avgq
