#include "avgq/randgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "avgq/certificate.hpp"
#include "avgq/errors.hpp"
#include "avgq/hypergeometric.hpp"
#include "avgq/parallel.hpp"

namespace avgq {

TruthTable sample_fixed_weight(int n, std::uint64_t m, std::uint64_t seed) {
  Rng rng(seed);
  return sample_fixed_weight(n, m, rng);
}

TruthTable sample_fixed_weight(int n, std::uint64_t m, Rng& rng) {
  TruthTable f(n);
  const std::uint64_t size = f.size();
  if (m > size) throw PreconditionError("weight " + std::to_string(m) + " exceeds 2^n");
  // Pick whichever of the on-set and off-set is smaller, then complement.
  const bool flip = m > size / 2;
  const std::uint64_t k = flip ? size - m : m;
  if (k > size / 64) {
    std::vector<std::uint32_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0u);
    for (std::uint64_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + rng.below(size - i)]);
      f.set(idx[i], true);
    }
  } else {
    for (std::uint64_t placed = 0; placed < k;) {
      const std::uint64_t x = rng.below(size);
      if (!f[x]) {
        f.set(x, true);
        ++placed;
      }
    }
  }
  return flip ? ~f : f;
}

BoxProcessTrace box_process(int n, std::uint64_t m, const PathSpec& path, std::uint64_t seed) {
  Rng rng(seed);
  return box_process(n, m, path, rng);
}

BoxProcessTrace box_process(int n, std::uint64_t m, const PathSpec& path, Rng& rng) {
  if (n < 0 || n > kMaxBoxVars) throw LimitError("box process supports n <= 62");
  if (m > (std::uint64_t{1} << n)) throw PreconditionError("weight exceeds 2^n");
  if (path.length() > static_cast<std::size_t>(n)) throw PreconditionError("path longer than n");
  for (const auto& [var, v] : path.steps())
    if (var >= n) throw PreconditionError("path variable out of range");

  BoxProcessTrace trace{n, m, path, {m}};
  trace.t.reserve(path.length() + 1);
  for (std::size_t j = 1; j <= path.length(); ++j) {
    const std::uint64_t half = std::uint64_t{1} << (n - static_cast<int>(j));
    const std::uint64_t prev = trace.t.back();
    if (prev > 2 * half) throw std::logic_error("box process: more items than the box holds");
    trace.t.push_back(sample_hypergeometric(rng, 2 * half, half, prev));
  }
  return trace;
}

bool ratio_in_window(std::uint64_t parent, std::uint64_t child, double delta) {
  if (parent == 0) return false;
  const long double p = static_cast<long double>(parent);
  const long double c2 = 2.0L * static_cast<long double>(child);
  return c2 >= (1.0L - delta) * p && c2 <= (1.0L + delta) * p;
}

bool is_delta_parity_path(const TruthTable& f, const PathSpec& path, double delta) {
  std::vector<std::uint64_t> alive = f.on_set();
  for (const auto& [var, v] : path.steps()) {
    if (var >= f.num_vars()) throw std::out_of_range("path variable out of range");
    const std::uint64_t parent = alive.size();
    std::erase_if(alive, [&](std::uint64_t x) { return static_cast<bool>((x >> var) & 1u) != v; });
    if (!ratio_in_window(parent, alive.size(), delta)) return false;
  }
  return true;
}

namespace {

// Bits of x selected by mask, packed in ascending order.
std::uint32_t extract(std::uint64_t x, std::uint32_t mask) {
  std::uint32_t out = 0;
  int k = 0;
  for (std::uint32_t m = mask; m; m &= m - 1) out |= static_cast<std::uint32_t>((x >> std::countr_zero(m)) & 1u) << k++;
  return out;
}

// Index of a packed assignment over `mask` extended by bit `v` at `var`.
std::uint32_t insert_bit(std::uint32_t packed, std::uint32_t mask, int var, bool v) {
  const int below = std::popcount(mask & ((1u << var) - 1));
  const std::uint32_t low = packed & ((1u << below) - 1);
  const std::uint32_t high = packed >> below;
  return low | (static_cast<std::uint32_t>(v) << below) | (high << (below + 1));
}

}  // namespace

bool is_t_delta_parity(const TruthTable& f, int t, double delta) {
  const int n = f.num_vars();
  if (t < 0 || t > n) throw PreconditionError("t must lie in [0, n]");
  if (t == 0) return true;
  const std::vector<std::uint64_t> black = f.on_set();
  if (black.empty()) return false;

  // Weight of every restriction with at most t fixed variables, keyed by the
  // fixed set and then by the packed assignment.
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> counts;
  for (int k = 0; k <= t; ++k) {
    if (k == 0) {
      counts[0] = {static_cast<std::uint32_t>(black.size())};
      continue;
    }
    const std::uint32_t last = k == n ? ~0u >> (32 - n) : 0;
    for (std::uint32_t s = (1u << k) - 1; s < (1u << n);) {
      auto& c = counts[s];
      c.assign(std::size_t{1} << k, 0);
      for (std::uint64_t x : black) ++c[extract(x, s)];
      if (s == last) break;
      const std::uint32_t lo = s & -s;
      const std::uint32_t r = s + lo;
      s = (((r ^ s) >> 2) / lo) | r;
    }
  }
  for (const auto& [s, parent] : counts) {
    if (std::popcount(s) >= t) continue;
    for (int var = 0; var < n; ++var) {
      if ((s >> var) & 1u) continue;
      const auto& child = counts.at(s | (1u << var));
      for (std::uint32_t a = 0; a < parent.size(); ++a)
        for (int v = 0; v < 2; ++v)
          if (!ratio_in_window(parent[a], child[insert_bit(a, s, var, v)], delta)) return false;
    }
  }
  return true;
}

double lemma36_bound(std::uint64_t m, double epsilon, double delta) {
  const double lm = std::log2(static_cast<double>(m));
  return 2.0 * epsilon * lm * std::exp(-0.5 * delta * delta * std::pow(static_cast<double>(m), 1.0 - epsilon));
}

ExperimentReport lemma36_experiment(const Lemma36Params& p) {
  if (p.n < 1 || p.n > kMaxBoxVars) throw PreconditionError("n must lie in [1, 62]");
  if (p.m < 2 || p.m > (std::uint64_t{1} << p.n)) throw PreconditionError("m must lie in [2, 2^n]");
  if (!(p.epsilon > 0 && p.epsilon < 1)) throw PreconditionError("eps must lie in (0, 1)");
  if (!(p.delta >= 0 && p.delta < 1)) throw PreconditionError("delta must lie in [0, 1)");
  if (p.path_len < 0 || p.path_len > p.n) throw PreconditionError("path length must lie in [0, n]");
  if (p.trials == 0) throw PreconditionError("trials must be positive");

  const double lm = std::log2(static_cast<double>(p.m));
  const bool length_ok = p.path_len <= p.epsilon * lm * (1 + 1e-12);
  const bool delta_ok = p.delta <= (1 + 1e-12) / (2 * p.epsilon * lm);

  std::vector<std::pair<int, bool>> steps;
  for (int j = 0; j < p.path_len; ++j) steps.emplace_back(j, true);
  const PathSpec path(std::move(steps));

  // 0: stayed in the window; r: first round that left it.
  std::vector<std::uint8_t> failed_at(p.trials, 0);
  parallel_for(0, p.trials, 0, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
      Rng rng(p.seed, trial);
      std::uint64_t prev = p.m;
      for (int j = 1; j <= p.path_len; ++j) {
        const std::uint64_t half = std::uint64_t{1} << (p.n - j);
        const std::uint64_t next = sample_hypergeometric(rng, 2 * half, half, prev);
        if (!ratio_in_window(prev, next, p.delta)) {
          failed_at[trial] = static_cast<std::uint8_t>(j);
          break;
        }
        prev = next;
      }
    }
  });

  std::vector<std::uint64_t> by_round(static_cast<std::size_t>(p.path_len) + 1, 0);
  for (auto r : failed_at) ++by_round[r];
  const std::uint64_t failures = p.trials - by_round[0];
  const double freq = static_cast<double>(failures) / static_cast<double>(p.trials);
  const double bound = lemma36_bound(p.m, p.epsilon, p.delta);

  ExperimentReport rep;
  rep.experiment = "lemma36";
  rep.params = {{"n", p.n},         {"m", p.m},       {"eps", p.epsilon},
                {"delta", p.delta}, {"len", p.path_len}, {"path", "x_j = 1 for j = 1..len"}};
  rep.seed = p.seed;
  rep.trials = p.trials;
  rep.bound_formula = "2*eps*log2(m)*exp(-delta^2*m^(1-eps)/2)";
  rep.bound_value = bound;
  nlohmann::json& st = rep.statistics;
  st["failures"] = failures;
  st["frequency"] = freq;
  st["failures_by_round"] = std::vector<std::uint64_t>(by_round.begin() + 1, by_round.end());
  st["hypotheses"] = {{"len <= eps*log2(m)", length_ok}, {"delta <= 1/(2*eps*log2(m))", delta_ok}};
  if (bound >= 1.0) {
    rep.verdict = "vacuous";
  } else {
    const double se = std::sqrt(bound * (1 - bound) / static_cast<double>(p.trials));
    st["standard_error"] = se;
    st["threshold"] = bound + 3 * se;
    rep.verdict = freq <= bound + 3 * se ? "pass" : "fail";
  }
  return rep;
}

double theorem12_threshold(int n, std::uint64_t m) {
  const double r = static_cast<double>(m) / std::log2(static_cast<double>(n));
  return std::log2(r) - 3 * std::log2(std::log2(r)) - 5;
}

ExperimentReport theorem12_harness(const Theorem12Params& p) {
  if (p.n < 2 || p.n > kMaxCertificateVars)
    throw LimitError("theorem12 needs 2 <= n <= " + std::to_string(kMaxCertificateVars));
  const double log_n = std::log2(static_cast<double>(p.n));
  if (static_cast<double>(p.m) < 4 * log_n || p.m > (std::uint64_t{1} << (p.n - 1)))
    throw PreconditionError("theorem12 needs 4 log2 n <= m <= 2^(n-1)");
  if (p.trials == 0) throw PreconditionError("trials must be positive");

  const bool lemma37 = p.t >= 1 && p.t <= std::log2(static_cast<double>(p.m)) - 1 &&
                       p.delta <= (1 + 1e-12) / (2 * p.t) && p.delta >= 0;
  const double threshold = theorem12_threshold(p.n, p.m);

  std::vector<int> cert(p.trials);
  std::vector<std::uint8_t> parity(p.trials, 0);
  parallel_for(0, p.trials, 0, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(p.seed, i);
      const TruthTable f = sample_fixed_weight(p.n, p.m, rng);
      cert[i] = min_certificate(f);
      if (lemma37) parity[i] = is_t_delta_parity(f, p.t, p.delta);
    }
  });

  std::vector<std::uint64_t> histogram(static_cast<std::size_t>(p.n) + 1, 0);
  std::uint64_t parity_count = 0, counterexamples = 0, meeting = 0;
  double sum = 0;
  for (std::uint64_t i = 0; i < p.trials; ++i) {
    ++histogram[static_cast<std::size_t>(cert[i])];
    sum += cert[i];
    if (cert[i] >= threshold) ++meeting;
    if (parity[i]) {
      ++parity_count;
      if (cert[i] < p.t) ++counterexamples;
    }
  }
  std::vector<int> sorted = cert;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  ExperimentReport rep;
  rep.experiment = "theorem12";
  rep.params = {{"n", p.n}, {"m", p.m}, {"t", p.t}, {"delta", p.delta}};
  rep.seed = p.seed;
  rep.trials = p.trials;
  rep.bound_formula = "log2(m/log2 n) - 3*log2(log2(m/log2 n)) - 5";
  rep.bound_value = threshold;
  nlohmann::json& st = rep.statistics;
  st["min_certificate_median"] = median;
  st["min_certificate_mean"] = sum / static_cast<double>(p.trials);
  st["min_certificate_min"] = sorted.front();
  st["min_certificate_max"] = sorted.back();
  st["min_certificate_histogram"] = histogram;
  st["threshold_vacuous"] = threshold <= 0;
  st["fraction_meeting_threshold"] = static_cast<double>(meeting) / static_cast<double>(p.trials);
  st["lemma37_applicable"] = lemma37;
  st["parity_samples"] = parity_count;
  st["lemma37_counterexamples"] = counterexamples;
  if (counterexamples > 0)
    rep.verdict = "fail";
  else if (threshold <= 0)
    rep.verdict = "vacuous";
  else
    rep.verdict = meeting == p.trials ? "pass" : "fail";
  return rep;
}

}  // namespace avgq
