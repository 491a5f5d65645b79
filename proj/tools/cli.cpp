#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "avgq/certificate.hpp"
#include "avgq/criticality.hpp"
#include "avgq/errors.hpp"
#include "avgq/exact.hpp"
#include "avgq/experiments.hpp"
#include "avgq/families.hpp"
#include "avgq/parallel.hpp"
#include "avgq/randgen.hpp"
#include "avgq/strategies.hpp"

namespace avgq::cli {

namespace {

struct RunConfig {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  int threads = 1;
  int dp_limit = kDefaultDpLimit;

  ExactConfig exact() const { return {dp_limit, 0}; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
auto with_file(const std::string& path, Fn&& fn) {
  const std::string text = read_file(path);
  try {
    return fn(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

TruthTable load_table(const std::string& path) {
  return with_file(path, [](const std::string& t) { return parse_truth_table(t); });
}

bool looks_like_dnf(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text.compare(first, 2, "n=") == 0;
}

// Truth table or DNF file.
TruthTable load_function(const std::string& path) {
  return with_file(path, [](const std::string& t) {
    return looks_like_dnf(t) ? dnf_to_table(dnf_parse(t)) : parse_truth_table(t);
  });
}

std::optional<int> certificate_if_small(const TruthTable& f) {
  if (f.num_vars() > kMaxCertificateVars) return std::nullopt;
  return min_certificate(f);
}

nlohmann::json optional_json(const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

ExperimentReport cmd_exact(const std::string& path, const RunConfig& cfg) {
  const TruthTable f = load_table(path);
  const ExactConfig ec = cfg.exact();
  const ExactRational dave = dave_exact(f, ec);
  ExperimentReport rep;
  rep.experiment = "exact";
  rep.params = {{"n", f.num_vars()}};
  rep.statistics = {{"weight", f.weight()},
                    {"D_ave", {{"fraction", dave.fraction()}, {"decimal", dave.decimal()}}},
                    {"D", worst_depth(f, ec)},
                    {"dtsize", dtsize_min(f, ec)},
                    {"min_certificate", optional_json(certificate_if_small(f))}};
  return rep;
}

ExperimentReport cmd_strategy(const std::string& path, const std::string& name, const std::string& mode,
                              std::uint64_t trials, const RunConfig& cfg) {
  const TruthTable f = load_table(path);
  const int n = f.num_vars();
  const std::uint64_t m = f.weight();
  const double log_n = std::log2(static_cast<double>(n));
  ExperimentReport rep;
  rep.experiment = "strategy";
  rep.params = {{"strategy", name}, {"mode", mode}, {"n", n}, {"weight", m}};
  rep.seed = cfg.seed;
  auto& st = rep.statistics;

  double measured = 0, tolerance = 0;
  if (name.starts_with("restriction:")) {
    const double p = static_cast<double>(parse_rational(name.substr(12)));
    if (!(p >= 0 && p <= 1)) throw PreconditionError("restriction needs p in [0, 1]");
    const std::uint64_t samples = trials ? trials : 200;
    const auto r = measure_restriction_strategy(f, p, samples, cfg.seed, cfg.exact());
    rep.trials = samples;
    measured = r.mean_cost;
    tolerance = 3 * n / std::sqrt(static_cast<double>(samples));
    st["mean_queried"] = r.mean_queried;
    st["mean_restricted_depth"] = r.mean_restricted_depth;
    if (n <= kMaxTailVars) {
      const auto tail = restriction_tail(f, parse_rational(name.substr(12)), cfg.exact());
      double b = n * (1 - p);
      for (int t = 1; t <= n; ++t) b += static_cast<double>(tail.tail[static_cast<std::size_t>(t)]);
      rep.bound_formula = "n(1-p) + sum_t Pr[D(f|rho) >= t]";
      rep.bound_value = b;
    }
  } else {
    DecisionStrategy s = [&] {
      if (name == "naive") return naive_strategy(f);
      if (name == "ecs") return ecs_strategy(f);
      if (name == "partition") return partition_strategy(f);
      if (name == "recursive") return recursive_strategy(f);
      throw ParseError("unknown strategy '" + name + "' (naive, ecs, partition, recursive, restriction:<p>)");
    }();
    if (mode == "exact") {
      const auto c = measure_exact(s, f);
      measured = c.mean;
      rep.trials = c.trials;
      st["measured_fraction"] = c.exact->fraction();
      st["max_cost"] = c.max_cost;
    } else {
      const std::uint64_t t = trials ? trials : 10000;
      const auto c = measure_monte_carlo(s, f, t, cfg.seed);
      measured = c.mean;
      rep.trials = t;
      tolerance = 3 * n / std::sqrt(static_cast<double>(t));
      st["max_cost"] = c.max_cost;
    }
    if (name == "naive" && m >= 1) {
      rep.bound_formula = "log2(wt) + 2";
      rep.bound_value = std::log2(static_cast<double>(m)) + 2;
    } else if (name == "ecs") {
      rep.bound_formula = "5";
      rep.bound_value = 5;
    } else if (name == "partition") {
      rep.bound_formula = "40";
      rep.bound_value = 40;
    } else if (name == "recursive" && m >= 1) {
      if (static_cast<double>(m) >= 4 * log_n && n > 1) {
        const double r = static_cast<double>(m) / log_n;
        rep.bound_formula = "log2(m/log2 n) + log2 log2(m/log2 n) + 87";
        rep.bound_value = std::log2(r) + std::log2(std::log2(r)) + 87;
      } else {
        rep.bound_formula = "40";
        rep.bound_value = 40;
      }
    }
  }
  st["measured"] = measured;
  if (tolerance > 0) st["tolerance"] = tolerance;
  if (!rep.bound_value)
    rep.verdict = "info";
  else if (*rep.bound_value >= n)
    rep.verdict = "vacuous";
  else
    rep.verdict = measured <= *rep.bound_value + tolerance ? "pass" : "fail";
  return rep;
}

PathSpec parse_path(const std::string& text) {
  std::vector<std::pair<int, bool>> steps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("path steps look like <var>:<0|1>, got '" + item + "'");
    const auto var = parse_count(item.substr(0, colon));
    const std::string v = item.substr(colon + 1);
    if (var < 1 || (v != "0" && v != "1")) throw ParseError("bad path step '" + item + "'");
    steps.emplace_back(static_cast<int>(var) - 1, v == "1");
  }
  return PathSpec(steps);
}

ExperimentReport cmd_parity(const std::string& path, int t, const std::string& delta_text, const std::string& path_text) {
  const TruthTable f = load_table(path);
  const int n = f.num_vars();
  const double delta = static_cast<double>(parse_rational(delta_text));
  if (t < 0 || t > n) throw PreconditionError("t must lie in [0, n]");
  ExperimentReport rep;
  rep.experiment = "parity";
  rep.params = {{"n", n}, {"t", t}, {"delta", delta_text}};
  auto& st = rep.statistics;
  const std::uint64_t m = f.weight();
  const bool parity = is_t_delta_parity(f, t, delta);
  st["t_delta_parity"] = parity;
  if (!path_text.empty()) {
    const PathSpec p = parse_path(path_text);
    for (const auto& [var, v] : p.steps())
      if (var >= n) throw PreconditionError("path variable beyond n");
    st["path_delta_parity"] = is_delta_parity_path(f, p, delta);
  }
  const auto cert = certificate_if_small(f);
  st["min_certificate"] = optional_json(cert);
  const bool hyp = m >= 1 && t >= 1 && t <= std::log2(static_cast<double>(m)) - 1 && delta <= 1.0 / (2 * t) + 1e-12 &&
                   m <= (std::uint64_t{1} << (n - 1));
  st["lemma37_hypotheses"] = hyp;
  rep.bound_formula = "min_certificate >= t";
  rep.bound_value = t;
  if (hyp && parity && cert)
    rep.verdict = *cert >= t ? "pass" : "fail";
  else
    rep.verdict = "info";
  return rep;
}

ExperimentReport cmd_criticality(const std::string& path, const std::string& grid_text, const RunConfig& cfg) {
  const TruthTable f = load_function(path);
  const int n = f.num_vars();
  std::vector<Rational> grid;
  if (grid_text.empty()) {
    grid = default_p_grid();
  } else {
    std::stringstream ss(grid_text);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(parse_rational(item));
  }
  const auto est = lambda_estimate(f, grid, cfg.exact());
  const DepthProfile profile(f, cfg.exact());
  ExperimentReport rep;
  rep.experiment = "criticality";
  rep.params = {{"n", n}};
  nlohmann::json tails = nlohmann::json::array();
  bool mass = true;
  for (const auto& p : grid) {
    const auto rt = profile.tail(p);
    mass = mass && rt.total_mass == 1;
    nlohmann::json row = {{"p", rational_text(p)}};
    for (const auto& q : rt.tail) row["tail"].push_back(rational_text(q));
    tails.push_back(row);
  }
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& [p, t] : est.witnesses) witnesses.push_back({{"p", rational_text(p)}, {"t", t}});
  const double dave = dave_exact(f, cfg.exact()).to_double();
  const double bound = lemma43_bound(n, est.lambda);
  rep.statistics = {{"lambda", est.lambda}, {"witnesses", witnesses}, {"tails", tails},
                    {"D_ave", dave},        {"mass_one", mass}};
  rep.bound_formula = "n(1 - 1/lambda) + 2 sqrt(n/lambda)";
  rep.bound_value = bound;
  rep.verdict = dave <= bound && mass ? "pass" : "fail";
  return rep;
}

ExperimentReport cmd_bounds(const std::string& name, const std::vector<std::string>& tokens) {
  const Params p = Params::parse(tokens);
  ExperimentReport rep;
  rep.experiment = "bounds";
  rep.params["bound"] = name;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    rep.params[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto need = [&](const std::string& key) {
    if (!p.has(key)) throw ParseError("bound '" + name + "' needs " + key + "=");
    return p.real(key, 0);
  };
  auto set = [&](const std::string& formula, double value) {
    rep.bound_formula = formula;
    rep.bound_value = value;
  };
  if (name == "lemma32") {
    p.only({"m"});
    set("log2(m) + 2", std::log2(need("m")) + 2);
  } else if (name == "lemma34") {
    set("5", 5);
  } else if (name == "cor35") {
    set("40", 40);
  } else if (name == "prop31") {
    p.only({"n"});
    set("2(1 - 2^-n)", 2 * (1 - std::pow(2.0, -need("n"))));
  } else if (name == "theorem11") {
    p.only({"n", "m"});
    const double r = need("m") / std::log2(need("n"));
    set("log2(m/log2 n) + log2 log2(m/log2 n) + 87", std::log2(r) + std::log2(std::log2(r)) + 87);
  } else if (name == "theorem12") {
    p.only({"n", "m"});
    const double v = theorem12_threshold(static_cast<int>(need("n")), p.count("m", 0));
    set("log2(m/log2 n) - 3 log2 log2(m/log2 n) - 5", v);
    rep.verdict = v <= 0 ? "vacuous" : "info";
  } else if (name == "lemma36") {
    p.only({"m", "eps", "delta"});
    const double v = lemma36_bound(p.count("m", 0), need("eps"), need("delta"));
    set("2 eps log2(m) exp(-delta^2 m^(1-eps) / 2)", v);
    rep.verdict = v >= 1 ? "vacuous" : "info";
  } else if (name == "lemma43") {
    p.only({"n", "lambda"});
    set("n(1 - 1/lambda) + 2 sqrt(n/lambda)", lemma43_bound(static_cast<int>(need("n")), need("lambda")));
  } else if (name == "width" || name == "size" || name == "circuit" || name == "formula") {
    const int n = static_cast<int>(need("n"));
    const double c = need("c");
    if (name == "width") {
      p.only({"n", "c", "w"});
      set("n(1 - 1/(c w))", corollary_bound(CorollaryKind::kWidth, n, c, need("w")));
    } else if (name == "size") {
      p.only({"n", "c", "s"});
      set("n(1 - 1/(c log2 s))", corollary_bound(CorollaryKind::kSize, n, c, need("s")));
    } else {
      p.only({"n", "c", "s", "d"});
      const bool circuit = name == "circuit";
      set(circuit ? "n(1 - 1/(c log2 s)^(d-1))" : "n(1 - 1/((c/d) log2 s)^(d-1))",
          corollary_bound(circuit ? CorollaryKind::kCircuit : CorollaryKind::kFormula, n, c, need("s"),
                          static_cast<int>(need("d"))));
    }
  } else if (name == "theorem13") {
    p.only({"n", "w", "d"});
    const int n = static_cast<int>(need("n")), w = static_cast<int>(need("w"));
    if (w < 1 || w > 62 || w > n) throw PreconditionError("theorem13 bounds need 1 <= w <= n");
    const std::uint64_t cube = std::uint64_t{1} << w;
    const std::uint64_t m = (cube + 2 * static_cast<std::uint64_t>(n) - 1) / (2 * static_cast<std::uint64_t>(n));
    const int h = n / w;
    const double pr = static_cast<double>(m) / static_cast<double>(cube);
    const double d = p.real("d", 0);
    rep.statistics = {{"m", m}, {"h", h}, {"p", pr}, {"lower", h * d * std::pow(1 - pr, h)}};
    set("h (log2 m + 2)", h * (std::log2(static_cast<double>(m)) + 2));
  } else {
    throw ParseError("unknown bound '" + name +
                     "' (prop31, lemma32, lemma34, cor35, theorem11, theorem12, lemma36, lemma43, width, size, "
                     "circuit, formula, theorem13)");
  }
  return rep;
}

void emit(const ExperimentReport& rep, const RunConfig& cfg, std::ostream& out) {
  const std::string text = cfg.format == "csv" ? rep.to_csv() : rep.dump();
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + cfg.out + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Average-case query complexity toolkit", "avgq"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "RNG seed (default 0)");
  app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "Write the report to this file");
  app.add_option("--threads", cfg.threads, "Worker threads (0: all cores); never changes results");
  app.add_option("--dp-limit", cfg.dp_limit, "Largest n for the 3^n programs")->check(CLI::Range(0, kMaxDpLimit));

  std::string file, name, mode = "exact", delta = "1/6", path, grid;
  std::uint64_t trials = 0, n_arg = 0;
  int t = 3, w = 0, candidates = kDefaultCandidates;
  bool hex = false;
  std::vector<std::string> rest;

  auto* exact = app.add_subcommand("exact", "D_ave, D, DT size and min certificate of a table");
  exact->add_option("file", file, "Truth-table file")->required();

  auto* strategy = app.add_subcommand("strategy", "Measure a query strategy against its bound");
  strategy->add_option("file", file, "Truth-table file")->required();
  strategy->add_option("name", name, "naive | ecs | partition | recursive | restriction:<p>")->required();
  strategy->add_option("--mode", mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  strategy->add_option("--trials", trials, "Monte Carlo inputs, or restriction samples");

  auto* sample = app.add_subcommand("sample", "Print a uniform function of weight m on n variables");
  sample->add_option("n", n_arg)->required();
  sample->add_option("m", name, "Weight, e.g. 512 or 2^9")->required();
  sample->add_flag("--hex", hex, "Hex table body");

  auto* parity = app.add_subcommand("parity", "(t, delta)-parity and path checks");
  parity->add_option("file", file, "Truth-table file")->required();
  parity->add_option("--t", t, "Path length bound");
  parity->add_option("--delta", delta, "Window half-width, e.g. 1/6");
  parity->add_option("--path", path, "Path such as 1:1,3:0 (1-based variables)");

  auto* construct = app.add_subcommand("construct", "Build a Theorem 1.3 DNF instance");
  construct->add_option("n", n_arg)->required();
  construct->add_option("w", w)->required();
  construct->add_option("--candidates", candidates, "Samples of g to choose from");
  std::string dnf_out;
  construct->add_option("--dnf-out", dnf_out, "Also write the formula to this file");

  auto* crit = app.add_subcommand("criticality", "Restriction tails and lambda estimate");
  crit->add_option("file", file, "Truth-table or DNF file")->required();
  crit->add_option("--grid", grid, "Comma-separated p values (default 1/2 .. 1/1024)");

  auto* bounds = app.add_subcommand("bounds", "Evaluate a closed-form bound");
  bounds->add_option("name", name)->required();
  bounds->add_option("params", rest, "key=value ...");

  auto* experiment = app.add_subcommand("experiment", "Run a named experiment");
  experiment->add_option("name", name)->required();
  experiment->add_option("params", rest, "key=value ...");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "avgq: " << e.what() << "\n";
    return kParse;
  }

  try {
    set_default_threads(cfg.threads);
    ExperimentReport rep;
    if (exact->parsed()) {
      rep = cmd_exact(file, cfg);
    } else if (strategy->parsed()) {
      rep = cmd_strategy(file, name, mode, trials, cfg);
    } else if (sample->parsed()) {
      if (n_arg > static_cast<std::uint64_t>(kMaxVars)) throw LimitError("n exceeds the truth-table limit");
      const TruthTable f = sample_fixed_weight(static_cast<int>(n_arg), parse_count(name), cfg.seed);
      const std::string text = format_truth_table(f, hex || f.num_vars() > 16);
      if (cfg.out.empty()) {
        out << text;
      } else {
        std::ofstream o(cfg.out, std::ios::binary);
        o << text;
      }
      return kOk;
    } else if (parity->parsed()) {
      rep = cmd_parity(file, t, delta, path);
    } else if (construct->parsed()) {
      rep = theorem13_report(static_cast<int>(n_arg), w, candidates, cfg.seed);
      const auto inst = theorem13_construct(static_cast<int>(n_arg), w, candidates, cfg.seed);
      rep.statistics["formula"] = dnf_print(inst.formula);
      if (!dnf_out.empty()) {
        std::ofstream o(dnf_out, std::ios::binary);
        if (!o) throw ParseError("cannot write '" + dnf_out + "'");
        o << dnf_print(inst.formula);
      }
    } else if (crit->parsed()) {
      rep = cmd_criticality(file, grid, cfg);
    } else if (bounds->parsed()) {
      rep = cmd_bounds(name, rest);
    } else if (experiment->parsed()) {
      rep = run_experiment(name, Params::parse(rest), cfg.seed);
    }
    emit(rep, cfg, out);
    return kOk;
  } catch (const ParseError& e) {
    err << "avgq: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const LimitError& e) {
    err << "avgq: limit exceeded: " << e.what() << "\n";
    return kLimit;
  } catch (const PreconditionError& e) {
    err << "avgq: precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const UnknownExperiment& e) {
    err << "avgq: " << e.what() << " (known: criticality, lemma36, prop41, pso-table, theorem12, theorem13)\n";
    return kUnknownExperiment;
  } catch (const std::exception& e) {
    err << "avgq: error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace avgq::cli
