#include "avgq/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "avgq/criticality.hpp"
#include "avgq/errors.hpp"
#include "avgq/exact.hpp"
#include "avgq/families.hpp"
#include "avgq/parallel.hpp"
#include "avgq/randgen.hpp"
#include "avgq/strategies.hpp"

namespace avgq {

namespace {

std::uint64_t plain_count(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError("expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::uint64_t parse_count(std::string_view text) {
  const auto caret = text.find('^');
  if (caret == std::string_view::npos) return plain_count(text);
  const std::uint64_t base = plain_count(text.substr(0, caret));
  const std::uint64_t exp = plain_count(text.substr(caret + 1));
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && v > UINT64_MAX / base) throw ParseError("'" + std::string(text) + "' overflows 64 bits");
    v *= base;
  }
  return v;
}

Params Params::parse(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> values;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got '" + tok + "'");
    values[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return Params(std::move(values));
}

std::uint64_t Params::count(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_count(it->second);
  } catch (const ParseError& e) {
    throw ParseError(key + ": " + e.what());
  }
}

int Params::integer(const std::string& key, int fallback) const {
  const std::uint64_t v = count(key, static_cast<std::uint64_t>(fallback));
  if (v > 1000000000ull) throw ParseError(key + ": value too large");
  return static_cast<int>(v);
}

double Params::real(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return static_cast<double>(parse_rational(it->second));
  } catch (const ParseError& e) {
    throw ParseError(key + ": " + e.what());
  }
}

std::pair<int, int> Params::range(const std::string& key, std::pair<int, int> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  const auto dots = v.find("..");
  if (dots == std::string::npos) {
    const int x = integer(key, 0);
    return {x, x};
  }
  try {
    return {static_cast<int>(plain_count(std::string_view(v).substr(0, dots))),
            static_cast<int>(plain_count(std::string_view(v).substr(dots + 2)))};
  } catch (const ParseError& e) {
    throw ParseError(key + ": " + e.what());
  }
}

void Params::only(const std::vector<std::string>& known) const {
  for (const auto& [k, v] : values_)
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ParseError("unknown parameter '" + k + "'");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"criticality", "lemma36",  "prop41",
                                                 "pso-table",   "theorem12", "theorem13"};
  return names;
}

ExperimentReport pso_table_report(int lo, int hi) {
  if (lo < 0 || hi < lo) throw PreconditionError("pso-table needs 0 <= lo <= hi");
  ExperimentReport rep;
  rep.experiment = "pso-table";
  rep.params = {{"n", std::to_string(lo) + ".." + std::to_string(hi)}};
  rep.bound_formula = "D = 2n+1; D_ave = 4 - 3/2^n";
  bool all = true;
  nlohmann::json rows = nlohmann::json::array();
  for (int n = lo; n <= hi; ++n) {
    const TruthTable f = pso(n);
    const ExactRational dave = dave_exact(f);
    const int depth = worst_depth(f);
    const ExactRational expect((std::int64_t{4} << n) - 3, n);
    const bool ok = dave == expect && depth == 2 * n + 1;
    all = all && ok;
    rows.push_back({{"n", n},
                    {"D", depth},
                    {"D_expected", 2 * n + 1},
                    {"D_ave", dave.fraction()},
                    {"D_ave_decimal", dave.decimal()},
                    {"D_ave_expected", expect.reduced().fraction()},
                    {"match", ok}});
  }
  rep.statistics["rows"] = rows;
  rep.verdict = all ? "pass" : "fail";
  return rep;
}

ExperimentReport theorem13_report(int n, int w, int candidates, std::uint64_t seed) {
  const Theorem13Instance inst = theorem13_construct(n, w, candidates, seed);
  const Theorem13Bounds b = theorem13_bounds(inst);
  ExperimentReport rep;
  rep.experiment = "theorem13";
  rep.params = {{"n", n}, {"w", w}, {"candidates", candidates}};
  rep.seed = seed;
  rep.trials = static_cast<std::uint64_t>(candidates);
  rep.bound_formula = "h*d*(1-p)^h <= D_ave <= h*(log2 m + 2)";
  rep.bound_value = b.upper;
  auto& st = rep.statistics;
  st["m"] = inst.m;
  st["h"] = inst.h;
  st["s"] = inst.s;
  st["size"] = inst.formula.size();
  st["width"] = inst.formula.width();
  st["d"] = inst.d;
  st["p"] = inst.p;
  st["chosen_candidate"] = inst.chosen;
  st["lower"] = b.lower;
  st["upper"] = b.upper;
  st["g"] = format_truth_table(inst.g, true);
  const bool structure = inst.m * static_cast<std::uint64_t>(inst.h) <= inst.s && inst.p <= 1.0 / n &&
                         inst.formula.width() == w && b.lower <= b.upper;
  st["structure_ok"] = structure;
  bool measured_ok = true;
  if (n <= kMaxMeasureVars) {
    const auto cost = measure_exact(block_or_strategy(inst.g, inst.h, n), dnf_to_table(inst.formula));
    st["measured"] = cost.mean;
    st["measured_fraction"] = cost.exact->fraction();
    measured_ok = b.lower <= cost.mean && cost.mean <= b.upper;
  }
  rep.verdict = structure && measured_ok ? "pass" : "fail";
  return rep;
}

ExperimentReport criticality_report(int n, int width, int max_terms, int count, std::uint64_t seed) {
  if (n < 1 || n > kMaxTailVars) throw LimitError("criticality needs 1 <= n <= " + std::to_string(kMaxTailVars));
  if (width < 1 || width > n || max_terms < 1 || count < 1)
    throw PreconditionError("criticality needs 1 <= width <= n, terms >= 1, count >= 1");
  struct Row {
    std::string formula;
    double lambda, dave, bound;
    bool mass_one;
  };
  std::vector<Row> rows(static_cast<std::size_t>(count));
  parallel_for(0, static_cast<std::uint64_t>(count), 0, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(seed ^ stream_tag::kFunctions, i);
      const int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
      const DnfFormula phi = random_dnf(n, terms, width, rng);
      const TruthTable f = dnf_to_table(phi);
      const ExactConfig serial{kDefaultDpLimit, 1};
      const DepthProfile profile(f, serial);
      bool mass = true;
      for (const auto& p : default_p_grid()) mass = mass && profile.tail(p).total_mass == 1;
      const double lambda = lambda_estimate(f, default_p_grid(), serial).lambda;
      rows[i] = {dnf_print(phi), lambda, dave_exact(f, serial).to_double(), lemma43_bound(n, lambda), mass};
    }
  });
  ExperimentReport rep;
  rep.experiment = "criticality";
  rep.params = {{"n", n}, {"width", width}, {"terms", max_terms}, {"count", count}, {"grid", "1/2^k, k=1..10"}};
  rep.seed = seed;
  rep.trials = static_cast<std::uint64_t>(count);
  rep.bound_formula = "D_ave <= n(1 - 1/lambda) + 2 sqrt(n/lambda)";
  std::uint64_t violations = 0, bad_mass = 0;
  double slack = 1e300;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    if (r.dave > r.bound) ++violations;
    if (!r.mass_one) ++bad_mass;
    slack = std::min(slack, r.bound - r.dave);
    out.push_back({{"lambda", r.lambda}, {"D_ave", r.dave}, {"bound", r.bound}, {"formula", r.formula}});
  }
  rep.statistics["violations"] = violations;
  rep.statistics["mass_not_one"] = bad_mass;
  rep.statistics["min_slack"] = slack;
  rep.statistics["rows"] = out;
  rep.verdict = violations == 0 && bad_mass == 0 ? "pass" : "fail";
  return rep;
}

ExperimentReport prop41_report(int max_n, int max_terms, int count, std::uint64_t seed) {
  if (max_n < 1 || max_n > kMaxMeasureVars || max_terms < 1 || count < 1)
    throw PreconditionError("prop41 needs 1 <= n <= 20, terms >= 1, count >= 1");
  std::vector<double> cost(static_cast<std::size_t>(count)), bound(static_cast<std::size_t>(count));
  parallel_for(0, static_cast<std::uint64_t>(count), 0, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(seed ^ stream_tag::kFunctions, i);
      const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n)));
      const int s = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
      const int w = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const auto r = prop41_check(random_dnf(n, s, w, rng));
      cost[i] = r.cost.mean;
      bound[i] = r.bound;
    }
  });
  std::uint64_t violations = 0;
  double worst = 0, sum = 0;
  for (std::size_t i = 0; i < cost.size(); ++i) {
    if (cost[i] > bound[i]) ++violations;
    worst = std::max(worst, cost[i] / bound[i]);
    sum += cost[i];
  }
  ExperimentReport rep;
  rep.experiment = "prop41";
  rep.params = {{"n_max", max_n}, {"terms_max", max_terms}, {"count", count}};
  rep.seed = seed;
  rep.trials = static_cast<std::uint64_t>(count);
  rep.bound_formula = "cost <= 2*(s+1)";
  rep.statistics = {{"violations", violations}, {"max_cost_over_bound", worst}, {"mean_cost", sum / count}};
  rep.verdict = violations == 0 ? "pass" : "fail";
  return rep;
}

ExperimentReport run_experiment(const std::string& name, const Params& p, std::uint64_t seed) {
  if (name == "pso-table") {
    p.only({"n"});
    const auto [lo, hi] = p.range("n", {0, 5});
    return pso_table_report(lo, hi);
  }
  if (name == "theorem13") {
    p.only({"n", "w", "candidates"});
    return theorem13_report(p.integer("n", 16), p.integer("w", 8), p.integer("candidates", kDefaultCandidates), seed);
  }
  if (name == "lemma36") {
    p.only({"n", "m", "eps", "delta", "len", "trials"});
    Lemma36Params q;
    q.n = p.integer("n", q.n);
    q.m = p.count("m", q.m);
    q.epsilon = p.real("eps", q.epsilon);
    q.delta = p.real("delta", q.delta);
    q.path_len = p.integer("len", q.path_len);
    q.trials = p.count("trials", q.trials);
    q.seed = seed;
    return lemma36_experiment(q);
  }
  if (name == "theorem12") {
    p.only({"n", "m", "trials", "t", "delta"});
    Theorem12Params q;
    q.n = p.integer("n", q.n);
    q.m = p.count("m", q.m);
    q.trials = p.count("trials", q.trials);
    q.t = p.integer("t", q.t);
    q.delta = p.real("delta", 1.0 / (2 * std::max(q.t, 1)));
    q.seed = seed;
    return theorem12_harness(q);
  }
  if (name == "criticality") {
    p.only({"n", "width", "terms", "count"});
    return criticality_report(p.integer("n", 10), p.integer("width", 3), p.integer("terms", 8), p.integer("count", 50),
                              seed);
  }
  if (name == "prop41") {
    p.only({"n", "terms", "count"});
    return prop41_report(p.integer("n", 12), p.integer("terms", 8), p.integer("count", 200), seed);
  }
  throw UnknownExperiment("unknown experiment '" + name + "'");
}

}  // namespace avgq
