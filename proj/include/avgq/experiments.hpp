#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avgq/report.hpp"

namespace avgq {

// key=value parameters. Values: integers, "2^k", fractions "a/b", decimals,
// and ranges "a..b" where a range is expected.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}
  // Each token must look like key=value.
  static Params parse(const std::vector<std::string>& tokens);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  int integer(const std::string& key, int fallback) const;
  double real(const std::string& key, double fallback) const;
  std::pair<int, int> range(const std::string& key, std::pair<int, int> fallback) const;
  // Throws ParseError naming the first key not in `known`.
  void only(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t parse_count(std::string_view text);

const std::vector<std::string>& experiment_names();

// Throws UnknownExperiment for names outside experiment_names().
ExperimentReport run_experiment(const std::string& name, const Params& params, std::uint64_t seed);

// D and D_ave of pso(n) for n in [lo, hi] against 2n+1 and 4 - 3/2^n.
ExperimentReport pso_table_report(int lo, int hi);
// Theorem 1.3 instance, its bounds, and the exact cost of the per-block
// sequential strategy.
ExperimentReport theorem13_report(int n, int w, int candidates, std::uint64_t seed);
// Random width-w DNFs on n variables: lambda estimate, exact D_ave, Lemma 4.3
// bound, and exact tail mass per instance.
ExperimentReport criticality_report(int n, int width, int max_terms, int count, std::uint64_t seed);
// Random DNFs with n <= max_n and s <= max_terms against 2 (s + 1).
ExperimentReport prop41_report(int max_n, int max_terms, int count, std::uint64_t seed);

}  // namespace avgq
