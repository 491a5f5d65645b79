#include "avgq/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "avgq/errors.hpp"
#include "avgq/parallel.hpp"

namespace avgq {

ExactRational::ExactRational(std::int64_t numerator, int exponent) : num_(numerator), exp_(exponent) {
  if (exponent < 0 || exponent > 62) throw std::out_of_range("denominator exponent outside 0..62");
}

ExactRational ExactRational::reduced() const {
  std::int64_t n = num_;
  int e = exp_;
  while (e > 0 && n % 2 == 0) {
    n /= 2;
    --e;
  }
  if (n == 0) e = 0;
  return ExactRational(n, e);
}

double ExactRational::to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

std::string ExactRational::fraction() const { return std::to_string(num_) + "/" + std::to_string(denominator()); }

std::string ExactRational::decimal() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", to_double());
  return buf;
}

bool operator==(const ExactRational& a, const ExactRational& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
  // Cross-multiply onto the larger exponent.
  const int e = std::max(a.exp_, b.exp_);
  const __int128 lhs = static_cast<__int128>(a.num_) << (e - a.exp_);
  const __int128 rhs = static_cast<__int128>(b.num_) << (e - b.exp_);
  return lhs < rhs ? std::strong_ordering::less : lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal;
}

DecisionTree::Evaluation DecisionTree::evaluate(std::uint64_t x) const {
  int at = 0;
  int cost = 0;
  while (!nodes_[static_cast<std::size_t>(at)].is_leaf()) {
    const auto& node = nodes_[static_cast<std::size_t>(at)];
    at = node.child[(x >> node.var) & 1u];
    ++cost;
  }
  return {nodes_[static_cast<std::size_t>(at)].value, cost};
}

int DecisionTree::depth() const {
  std::function<int(int)> rec = [&](int at) -> int {
    const auto& node = nodes_[static_cast<std::size_t>(at)];
    if (node.is_leaf()) return 0;
    return 1 + std::max(rec(node.child[0]), rec(node.child[1]));
  };
  return rec(0);
}

std::uint64_t DecisionTree::leaf_count() const {
  return static_cast<std::uint64_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

bool DecisionTree::is_reasonable_shape() const {
  std::function<bool(int, std::uint64_t)> rec = [&](int at, std::uint64_t seen) -> bool {
    const auto& node = nodes_[static_cast<std::size_t>(at)];
    if (node.is_leaf()) return true;
    if ((seen >> node.var) & 1u) return false;
    seen |= std::uint64_t{1} << node.var;
    return rec(node.child[0], seen) && rec(node.child[1], seen);
  };
  return rec(0, 0);
}

ExactRational DecisionTree::expected_cost(int n) const {
  std::function<std::int64_t(int, int)> rec = [&](int at, int d) -> std::int64_t {
    const auto& node = nodes_[static_cast<std::size_t>(at)];
    if (node.is_leaf()) return static_cast<std::int64_t>(d) << (n - d);
    return rec(node.child[0], d + 1) + rec(node.child[1], d + 1);
  };
  if (!is_reasonable_shape()) throw std::logic_error("decision tree repeats a variable on a path");
  return ExactRational(rec(0, 0), n);
}

bool DecisionTree::computes(const TruthTable& f) const {
  for (std::uint64_t x = 0; x < f.size(); ++x)
    if (evaluate(x).output != f[x]) return false;
  return true;
}

RestrictionLattice::RestrictionLattice(const TruthTable& f, Options options)
    : n_(f.num_vars()), options_(options), f_(&f) {
  if (n_ > options.config.dp_limit || n_ > kMaxDpLimit)
    throw LimitError("n = " + std::to_string(n_) + " exceeds the DP limit of " +
                     std::to_string(std::min(options.config.dp_limit, kMaxDpLimit)));
  pow3_.assign(static_cast<std::size_t>(n_) + 1, 1);
  for (int i = 1; i <= n_; ++i) pow3_[static_cast<std::size_t>(i)] = 3 * pow3_[static_cast<std::size_t>(i) - 1];
  states_ = pow3_[static_cast<std::size_t>(n_)];

  free_.assign(states_, 0);
  for (std::uint64_t s = 1; s < states_; ++s) free_[s] = (s % 3 == 2 ? 1u : 0u) | (free_[s / 3] << 1);
  weight_.assign(states_, 0);
  if (options_.cost) {
    cost_.assign(states_, 0);
    cost_choice_.assign(states_, -1);
  }
  if (options_.depth) {
    depth_.assign(states_, 0);
    depth_choice_.assign(states_, -1);
  }
  if (options_.size) leaves_.assign(states_, 1);

  const int threads = options_.config.threads > 0 ? options_.config.threads : default_threads();
  if (threads <= 1) {
    for (std::uint64_t s = 0; s < states_; ++s) evaluate(s);
  } else {
    // Level by level: a state with k free variables reads only level k-1.
    for (int level = 0; level <= n_; ++level) {
      parallel_for(0, states_, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t s = lo; s < hi; ++s)
          if (std::popcount(free_[s]) == level) evaluate(s);
      });
    }
  }
  f_ = nullptr;
}

void RestrictionLattice::evaluate(std::uint64_t s) {
  const std::uint32_t fm = free_[s];
  if (fm == 0) {
    std::uint64_t x = 0;
    std::uint64_t t = s;
    for (int b = 0; b < n_; ++b, t /= 3)
      if (t % 3 == 1) x |= std::uint64_t{1} << b;
    weight_[s] = (*f_)[x] ? 1 : 0;
    return;
  }
  const int low = std::countr_zero(fm);
  weight_[s] = weight_[child(s, low, false)] + weight_[child(s, low, true)];
  if (is_constant(s)) return;

  const int k = std::popcount(fm);
  std::uint32_t best_cost = std::numeric_limits<std::uint32_t>::max();
  int best_depth = std::numeric_limits<int>::max();
  std::uint32_t best_leaves = std::numeric_limits<std::uint32_t>::max();
  for (std::uint32_t rest = fm; rest != 0; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    const auto c0 = child(s, v, false);
    const auto c1 = child(s, v, true);
    if (options_.cost) {
      const std::uint32_t c = (std::uint32_t{1} << k) + cost_[c0] + cost_[c1];
      if (c < best_cost) {
        best_cost = c;
        cost_choice_[s] = static_cast<std::int8_t>(v);
      }
    }
    if (options_.depth) {
      const int d = 1 + std::max(depth_[c0], depth_[c1]);
      if (d < best_depth) {
        best_depth = d;
        depth_choice_[s] = static_cast<std::int8_t>(v);
      }
    }
    if (options_.size) best_leaves = std::min(best_leaves, leaves_[c0] + leaves_[c1]);
  }
  if (options_.cost) cost_[s] = best_cost;
  if (options_.depth) depth_[s] = static_cast<std::uint8_t>(best_depth);
  if (options_.size) leaves_[s] = best_leaves;
}

bool RestrictionLattice::is_constant(std::uint64_t s) const {
  const std::uint32_t w = weight_[s];
  return w == 0 || w == (std::uint32_t{1} << std::popcount(free_[s]));
}

std::uint64_t RestrictionLattice::index_of(const Restriction& rho) const {
  std::uint64_t idx = 0;
  for (int v = 0; v < n_; ++v) {
    const std::uint64_t d = rho.is_fixed(v) ? (rho.value(v) ? 1 : 0) : 2;
    idx += d * pow3_[static_cast<std::size_t>(v)];
  }
  return idx;
}

namespace {

RestrictionLattice::Options only(bool cost, bool depth, bool size, const ExactConfig& config) {
  RestrictionLattice::Options o;
  o.cost = cost;
  o.depth = depth;
  o.size = size;
  o.config = config;
  return o;
}

}  // namespace

ExactRational dave_exact(const TruthTable& f, const ExactConfig& config) {
  RestrictionLattice lattice(f, only(true, false, false, config));
  return ExactRational(static_cast<std::int64_t>(lattice.total_cost(lattice.root())), f.num_vars());
}

int worst_depth(const TruthTable& f, const ExactConfig& config) {
  RestrictionLattice lattice(f, only(false, true, false, config));
  return lattice.depth(lattice.root());
}

std::uint64_t dtsize_min(const TruthTable& f, const ExactConfig& config) {
  RestrictionLattice lattice(f, only(false, false, true, config));
  return lattice.leaves(lattice.root());
}

DecisionTree optimal_tree(const TruthTable& f, const ExactConfig& config) {
  RestrictionLattice lattice(f, only(true, false, false, config));
  std::vector<DecisionTree::Node> nodes;
  std::function<int(std::uint64_t)> build = [&](std::uint64_t s) -> int {
    const int at = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (lattice.is_constant(s)) {
      nodes[static_cast<std::size_t>(at)].value = lattice.constant_value(s);
      return at;
    }
    const int v = lattice.cost_choice(s);
    nodes[static_cast<std::size_t>(at)].var = v;
    const int c0 = build(lattice.child(s, v, false));
    const int c1 = build(lattice.child(s, v, true));
    nodes[static_cast<std::size_t>(at)].child[0] = c0;
    nodes[static_cast<std::size_t>(at)].child[1] = c1;
    return at;
  };
  build(lattice.root());
  return DecisionTree(std::move(nodes));
}

namespace {

// Total costs of every reasonable tree computing g, one entry per tree.
std::vector<std::int64_t> all_tree_costs(const TruthTable& g) {
  if (g.is_constant()) return {0};
  const int k = g.num_vars();
  std::vector<std::int64_t> out;
  for (int v = 0; v < k; ++v) {
    const auto lo = all_tree_costs(restrict(g, v, false));
    const auto hi = all_tree_costs(restrict(g, v, true));
    for (auto a : lo)
      for (auto b : hi) out.push_back((std::int64_t{1} << k) + a + b);
  }
  return out;
}

}  // namespace

ExactRational brute_force_dave(const TruthTable& f) {
  if (f.num_vars() > 3) throw LimitError("brute_force_dave enumerates trees only for n <= 3");
  const auto costs = all_tree_costs(f);
  return ExactRational(*std::min_element(costs.begin(), costs.end()), f.num_vars());
}

}  // namespace avgq
