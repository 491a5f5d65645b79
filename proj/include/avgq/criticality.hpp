#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avgq/exact.hpp"
#include "avgq/families.hpp"
#include "avgq/strategies.hpp"
#include "avgq/truth_table.hpp"

namespace avgq {

using Rational = boost::multiprecision::cpp_rational;

// "a/b", an integer, or a finite decimal such as "0.125".
Rational parse_rational(std::string_view text);
std::string rational_text(const Rational& q);

inline constexpr int kMaxTailVars = 12;

// tail[t] = Pr[D(f|rho) >= t] for t = 0..n, rho a p-random restriction (each
// variable free with probability p, else fixed to a uniform bit).
struct RestrictionTail {
  Rational p;
  std::vector<Rational> tail;
  Rational total_mass;  // sum of all restriction probabilities; exactly 1
};

// Restriction counts by (free variables, depth of the restricted function).
// Shared by every p, so a grid costs one lattice pass.
class DepthProfile {
 public:
  explicit DepthProfile(const TruthTable& f, const ExactConfig& config = {});
  int num_vars() const { return n_; }
  RestrictionTail tail(const Rational& p) const;

 private:
  int n_;
  std::vector<std::vector<std::uint64_t>> counts_;  // [free][depth]
};

RestrictionTail restriction_tail(const TruthTable& f, const Rational& p, const ExactConfig& config = {});

// p = 1/2, 1/4, ..., 1/1024.
std::vector<Rational> default_p_grid();

struct LambdaEstimate {
  double lambda = 1;
  std::vector<Rational> grid;
  std::vector<std::pair<Rational, int>> witnesses;  // (p, t) attaining the maximum
};

// Least lambda >= 1 with tail[t] <= (p lambda)^t over the grid and t >= 1.
LambdaEstimate lambda_estimate(const TruthTable& f, const std::vector<Rational>& grid,
                               const ExactConfig& config = {});

// n (1 - 1/lambda) + 2 sqrt(n / lambda).
double lemma43_bound(int n, double lambda);
// Free-variable probability at which the restriction strategy meets
// lemma43_bound: (1 - sqrt(lambda / n)) / lambda, or 0 when lambda >= n.
double lemma43_restriction_p(int n, double lambda);

enum class CorollaryKind { kWidth, kSize, kCircuit, kFormula };

// width:   n (1 - 1/(c w))
// size:    n (1 - 1/(c log2 s))
// circuit: n (1 - 1/(c log2 s)^(d-1))
// formula: n (1 - 1/((c/d) log2 s)^(d-1))
// `param` is w for kWidth and s otherwise; d >= 2 for the depth-d kinds.
double corollary_bound(CorollaryKind kind, int n, double c, double param, int d = 0);

struct Prop41Result {
  CostReport cost;
  double bound = 0;  // 2 (s + 1)
  bool pass = false;
};

// Exact cost of gate-by-gate evaluation of phi against 2 (size + 1).
Prop41Result prop41_check(const DnfFormula& phi);

}  // namespace avgq
