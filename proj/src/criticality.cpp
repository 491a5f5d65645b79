#include "avgq/criticality.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

#include "avgq/errors.hpp"

namespace avgq {

using boost::multiprecision::cpp_int;

namespace {

Rational power(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s(text);
  auto integer = [&](const std::string& part) {
    if (part.empty() || !std::all_of(part.begin(), part.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw ParseError("bad number '" + s + "'");
    return cpp_int(part);
  };
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const cpp_int den = integer(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(integer(s.substr(0, slash)), den);
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(integer(s));
  const std::string frac = s.substr(dot + 1);
  const cpp_int whole = dot == 0 ? cpp_int(0) : integer(s.substr(0, dot));
  const cpp_int scale = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(frac.size()));
  return Rational(whole * scale + integer(frac), scale);
}

std::string rational_text(const Rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

DepthProfile::DepthProfile(const TruthTable& f, const ExactConfig& config) : n_(f.num_vars()) {
  if (n_ > kMaxTailVars) throw LimitError("restriction tails need n <= " + std::to_string(kMaxTailVars));
  const RestrictionLattice lattice(f, {.cost = false, .depth = true, .size = false, .config = config});
  counts_.assign(static_cast<std::size_t>(n_) + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(n_) + 1, 0));
  for (std::uint64_t s = 0; s < lattice.state_count(); ++s)
    ++counts_[static_cast<std::size_t>(std::popcount(lattice.free_mask(s)))][static_cast<std::size_t>(lattice.depth(s))];
}

RestrictionTail DepthProfile::tail(const Rational& p) const {
  if (p < 0 || p > 1) throw PreconditionError("p must lie in [0, 1]");
  const Rational fixed = (1 - p) / 2;
  RestrictionTail out;
  out.p = p;
  std::vector<Rational> at_depth(static_cast<std::size_t>(n_) + 1, Rational(0));
  for (int k = 0; k <= n_; ++k) {
    const Rational weight = power(p, k) * power(fixed, n_ - k);
    for (int d = 0; d <= n_; ++d) {
      const auto c = counts_[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
      if (c) at_depth[static_cast<std::size_t>(d)] += weight * Rational(c);
    }
  }
  out.tail.assign(static_cast<std::size_t>(n_) + 1, Rational(0));
  Rational acc = 0;
  for (int d = n_; d >= 0; --d) {
    acc += at_depth[static_cast<std::size_t>(d)];
    out.tail[static_cast<std::size_t>(d)] = acc;
  }
  out.total_mass = acc;
  return out;
}

RestrictionTail restriction_tail(const TruthTable& f, const Rational& p, const ExactConfig& config) {
  return DepthProfile(f, config).tail(p);
}

std::vector<Rational> default_p_grid() {
  std::vector<Rational> grid;
  for (int k = 1; k <= 10; ++k) grid.emplace_back(1, cpp_int(1) << k);
  return grid;
}

LambdaEstimate lambda_estimate(const TruthTable& f, const std::vector<Rational>& grid, const ExactConfig& config) {
  if (grid.empty()) throw PreconditionError("lambda estimate needs a non-empty p grid");
  for (const auto& p : grid)
    if (p <= 0 || p > 1) throw PreconditionError("grid values must lie in (0, 1]");
  const DepthProfile profile(f, config);
  LambdaEstimate est;
  est.grid = grid;
  std::vector<std::pair<double, std::pair<Rational, int>>> values;
  for (const auto& p : grid) {
    const RestrictionTail rt = profile.tail(p);
    const double pd = static_cast<double>(p);
    for (int t = 1; t <= profile.num_vars(); ++t) {
      const Rational& q = rt.tail[static_cast<std::size_t>(t)];
      if (q <= 0) continue;
      values.push_back({std::pow(static_cast<double>(q), 1.0 / t) / pd, {p, t}});
    }
  }
  double best = 1;
  for (const auto& v : values) best = std::max(best, v.first);
  est.lambda = best;
  for (const auto& v : values)
    if (v.first >= best * (1 - 1e-12)) est.witnesses.push_back(v.second);
  return est;
}

double lemma43_bound(int n, double lambda) {
  if (n < 1 || !(lambda >= 1)) throw PreconditionError("lemma 4.3 bound needs n >= 1 and lambda >= 1");
  return n * (1 - 1 / lambda) + 2 * std::sqrt(n / lambda);
}

double lemma43_restriction_p(int n, double lambda) {
  if (n < 1 || !(lambda >= 1)) throw PreconditionError("lemma 4.3 needs n >= 1 and lambda >= 1");
  if (lambda >= n) return 0;
  return (1 - std::sqrt(lambda / n)) / lambda;
}

double corollary_bound(CorollaryKind kind, int n, double c, double param, int d) {
  if (n < 1 || !(c > 0) || !(param > 0)) throw PreconditionError("corollary bounds need positive n, c and w or s");
  const double log_s = std::log2(param);
  switch (kind) {
    case CorollaryKind::kWidth:
      return n * (1 - 1 / (c * param));
    case CorollaryKind::kSize:
      if (!(log_s > 0)) throw PreconditionError("size bound needs s >= 2");
      return n * (1 - 1 / (c * log_s));
    case CorollaryKind::kCircuit:
    case CorollaryKind::kFormula: {
      if (d < 2) throw PreconditionError("depth-d bounds need d >= 2");
      if (!(log_s > 0)) throw PreconditionError("size bound needs s >= 2");
      const double base = kind == CorollaryKind::kCircuit ? c * log_s : (c / d) * log_s;
      return n * (1 - 1 / std::pow(base, d - 1));
    }
  }
  throw std::logic_error("unknown corollary");
}

Prop41Result prop41_check(const DnfFormula& phi) {
  if (phi.n > kMaxMeasureVars) throw LimitError("prop41 check needs n <= " + std::to_string(kMaxMeasureVars));
  std::vector<Restriction> terms;
  for (const auto& t : phi.terms) terms.push_back(t.requirement());
  Prop41Result r;
  r.cost = measure_exact(term_or_strategy(phi.n, terms), dnf_to_table(phi));
  r.bound = 2.0 * static_cast<double>(phi.size() + 1);
  r.pass = r.cost.mean <= r.bound;
  return r;
}

}  // namespace avgq
