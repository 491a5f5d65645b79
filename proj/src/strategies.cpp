#include "avgq/strategies.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "avgq/ecs.hpp"
#include "avgq/errors.hpp"
#include "avgq/parallel.hpp"
#include "avgq/rng.hpp"

namespace avgq {

namespace {

using Order = std::shared_ptr<const std::vector<int>>;

// Current subfunction: a table over the still-free variables plus the original
// index of each of them.
struct SubFn {
  TruthTable table;
  std::vector<int> vars;  // ascending

  static SubFn whole(const TruthTable& f) {
    SubFn s{f, std::vector<int>(static_cast<std::size_t>(f.num_vars()))};
    std::iota(s.vars.begin(), s.vars.end(), 0);
    return s;
  }

  int position(int var) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), var);
    return it != vars.end() && *it == var ? static_cast<int>(it - vars.begin()) : -1;
  }
  // Fixes `var` if it is one of ours.
  void fix(int var, bool v) {
    const int pos = position(var);
    if (pos < 0) return;
    table = restrict(table, pos, v);
    vars.erase(vars.begin() + pos);
  }
  void fix(const Restriction& rho) {
    for (std::uint32_t m = rho.fixed; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      fix(v, rho.value(v));
    }
  }
  int free_count() const { return static_cast<int>(vars.size()); }
  bool constant() const { return table.is_constant(); }

  int first_free(const Order& order) const {
    if (!order) return vars.front();
    for (int v : *order)
      if (position(v) >= 0) return v;
    throw std::logic_error("query order misses a free variable");
  }
};

class NaiveState final : public StrategyState {
 public:
  NaiveState(SubFn sub, Order order) : sub_(std::move(sub)), order_(std::move(order)) {}

  Step next() override {
    if (sub_.constant()) return Step::stop(sub_.table.constant_value());
    pending_ = sub_.first_free(order_);
    return Step::query(pending_);
  }
  void answer(bool value) override { sub_.fix(pending_, value); }
  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<NaiveState>(*this); }

 private:
  SubFn sub_;
  Order order_;
  int pending_ = -1;
};

class EcsState final : public StrategyState {
 public:
  explicit EcsState(SubFn sub) : sub_(std::move(sub)) {}

  Step next() override {
    if (sub_.constant()) return Step::stop(sub_.table.constant_value());
    if (phase_ == Phase::kPlan) plan();
    switch (phase_) {
      case Phase::kNaive:
        pending_ = sub_.vars.front();
        break;
      case Phase::kFirst:
        pending_ = first_;
        break;
      case Phase::kSecond:
        pending_ = second_;
        break;
      case Phase::kOutside:
        pending_ = outside_;
        break;
      case Phase::kPlan:
        break;
    }
    return Step::query(pending_);
  }

  void answer(bool value) override {
    sub_.fix(pending_, value);
    switch (phase_) {
      case Phase::kFirst:
        first_value_ = value;
        phase_ = Phase::kSecond;
        break;
      case Phase::kSecond:
        // A pair against the class polarity leaves no black point.
        if ((first_value_ == value) != positive_ && !(sub_.constant() && !sub_.table.constant_value()))
          throw std::logic_error("ECS polarity violated");
        phase_ = Phase::kOutside;
        break;
      case Phase::kOutside:
        phase_ = Phase::kPlan;
        break;
      default:
        break;
    }
  }

  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<EcsState>(*this); }

 private:
  enum class Phase { kPlan, kNaive, kFirst, kSecond, kOutside };

  void plan() {
    const int n = sub_.free_count();
    if (n <= 4 || sub_.table.weight() <= 2) {
      phase_ = Phase::kNaive;
      return;
    }
    const EcsPartition part(sub_.table);
    const EcsClass* best = nullptr;
    for (const auto& c : part.classes())
      if (c.members.size() >= 3 && (!best || c.members.front() < best->members.front())) best = &c;
    if (!best || static_cast<int>(best->members.size()) == n) {
      phase_ = Phase::kNaive;
      return;
    }
    const int a = best->members[0], b = best->members[1];
    first_ = sub_.vars[static_cast<std::size_t>(a)];
    second_ = sub_.vars[static_cast<std::size_t>(b)];
    positive_ = part.positively_correlated(a, b);
    int pos = 0;
    while (part.class_of(pos) == part.class_of(a)) ++pos;
    outside_ = sub_.vars[static_cast<std::size_t>(pos)];
    phase_ = Phase::kFirst;
  }

  SubFn sub_;
  Phase phase_ = Phase::kPlan;
  int first_ = -1, second_ = -1, outside_ = -1, pending_ = -1;
  bool positive_ = true;
  bool first_value_ = false;
};

// Builds the state evaluating one OR component given what is already known.
using ComponentFactory = std::function<std::unique_ptr<StrategyState>(const Restriction& known)>;
using Components = std::shared_ptr<const std::vector<ComponentFactory>>;

class OrState final : public StrategyState {
 public:
  explicit OrState(Components comps) : comps_(std::move(comps)) {}
  OrState(const OrState& o)
      : comps_(o.comps_), known_(o.known_), index_(o.index_), inner_(o.inner_ ? o.inner_->clone() : nullptr),
        pending_(o.pending_) {}

  Step next() override {
    for (;;) {
      if (index_ == comps_->size()) return Step::stop(false);
      if (!inner_) inner_ = (*comps_)[index_](known_);
      const Step s = inner_->next();
      if (s.done) {
        if (s.output) return Step::stop(true);
        ++index_;
        inner_.reset();
        continue;
      }
      if (known_.is_fixed(s.var)) {
        inner_->answer(known_.value(s.var));
        continue;
      }
      pending_ = s.var;
      return s;
    }
  }
  void answer(bool value) override {
    known_ = known_.with(pending_, value);
    inner_->answer(value);
  }
  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<OrState>(*this); }

 private:
  Components comps_;
  Restriction known_;
  std::size_t index_ = 0;
  std::unique_ptr<StrategyState> inner_;
  int pending_ = -1;
};

Components partition_components(const SubFn& sub) {
  const std::vector<std::uint64_t> black = sub.table.on_set();
  const std::size_t m = black.size();
  auto comps = std::make_shared<std::vector<ComponentFactory>>();
  std::size_t at = 0;
  for (int b = 0; b < kPartitionBlocks; ++b) {
    const std::size_t len = m / kPartitionBlocks + (static_cast<std::size_t>(b) < m % kPartitionBlocks ? 1 : 0);
    if (len == 0) continue;
    const std::vector<std::uint64_t> block(black.begin() + static_cast<std::ptrdiff_t>(at),
                                           black.begin() + static_cast<std::ptrdiff_t>(at + len));
    at += len;
    auto part = std::make_shared<const SubFn>(SubFn{TruthTable::from_on_set(sub.table.num_vars(), block), sub.vars});
    comps->push_back([part](const Restriction& known) {
      SubFn s = *part;
      s.fix(known);
      return std::make_unique<EcsState>(std::move(s));
    });
  }
  return comps;
}

class RecursiveState final : public StrategyState {
 public:
  RecursiveState(SubFn sub, Order order) : sub_(std::move(sub)), order_(std::move(order)) {}
  RecursiveState(const RecursiveState& o)
      : sub_(o.sub_), order_(o.order_), remaining_(o.remaining_), tail_(o.tail_ ? o.tail_->clone() : nullptr),
        pending_(o.pending_) {}

  Step next() override {
    if (tail_) return tail_->next();
    if (sub_.constant()) return Step::stop(sub_.table.constant_value());
    if (remaining_ == 0) {
      const int n = sub_.free_count();
      const std::uint64_t m = sub_.table.weight();
      if (m >= static_cast<std::uint64_t>(n)) {
        tail_ = std::make_unique<NaiveState>(sub_, order_);
        return tail_->next();
      }
      if (static_cast<double>(m) <= 4 * std::log2(static_cast<double>(n))) {
        tail_ = std::make_unique<OrState>(partition_components(sub_));
        return tail_->next();
      }
      remaining_ = std::min(recursive_batch_size(m, n), n);
    }
    pending_ = sub_.first_free(order_);
    return Step::query(pending_);
  }
  void answer(bool value) override {
    if (tail_) {
      tail_->answer(value);
      return;
    }
    sub_.fix(pending_, value);
    --remaining_;
  }
  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<RecursiveState>(*this); }

 private:
  SubFn sub_;
  Order order_;
  int remaining_ = 0;
  std::unique_ptr<StrategyState> tail_;
  int pending_ = -1;
};

class RestrictionState final : public StrategyState {
 public:
  RestrictionState(std::shared_ptr<const RestrictionLattice> lattice, std::uint32_t queries)
      : lattice_(std::move(lattice)), queries_(queries), state_(lattice_->root()) {}

  Step next() override {
    if (queries_) {
      pending_ = std::countr_zero(queries_);
    } else {
      if (lattice_->is_constant(state_)) return Step::stop(lattice_->constant_value(state_));
      pending_ = lattice_->depth_choice(state_);
    }
    return Step::query(pending_);
  }
  void answer(bool value) override {
    queries_ &= ~(1u << pending_);
    state_ = lattice_->child(state_, pending_, value);
  }
  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<RestrictionState>(*this); }

 private:
  std::shared_ptr<const RestrictionLattice> lattice_;
  std::uint32_t queries_;
  std::uint64_t state_;
  int pending_ = -1;
};

class TermState final : public StrategyState {
 public:
  explicit TermState(const Restriction& term) : left_(term.fixed), want_(term.values) {}

  void assume(const Restriction& known) {
    const std::uint32_t both = left_ & known.fixed;
    if ((known.values ^ want_) & both) failed_ = true;
    left_ &= ~both;
  }
  Step next() override {
    if (failed_) return Step::stop(false);
    if (!left_) return Step::stop(true);
    pending_ = std::countr_zero(left_);
    return Step::query(pending_);
  }
  void answer(bool value) override {
    if (value != static_cast<bool>((want_ >> pending_) & 1u)) failed_ = true;
    left_ &= ~(1u << pending_);
  }
  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<TermState>(*this); }

 private:
  std::uint32_t left_;
  std::uint32_t want_;
  bool failed_ = false;
  int pending_ = -1;
};

Order make_order(const QueryOrder& q, int n) {
  if (q.order.empty()) return nullptr;
  std::vector<int> sorted = q.order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(sorted.size()) != n || sorted[static_cast<std::size_t>(i)] != i)
      throw PreconditionError("query order is not a permutation of the variables");
  return std::make_shared<const std::vector<int>>(q.order);
}

std::string log_n_text(int n) { return std::to_string(std::log2(static_cast<double>(n))); }

DecisionStrategy restriction_from_lattice(std::shared_ptr<const RestrictionLattice> lattice, std::uint32_t queries,
                                          double p) {
  const int n = lattice->num_vars();
  return DecisionStrategy("restriction:" + std::to_string(p), n, [lattice, queries] {
    return std::make_unique<RestrictionState>(lattice, queries);
  });
}

}  // namespace

DecisionStrategy::Run DecisionStrategy::run(std::uint64_t x) const {
  auto state = start();
  int cost = 0;
  std::uint64_t asked = 0;
  for (;;) {
    const Step s = state->next();
    if (s.done) return {s.output, cost};
    if (s.var < 0 || s.var >= n_) throw std::logic_error(name_ + ": query out of range");
    if ((asked >> s.var) & 1u) throw std::logic_error(name_ + ": variable queried twice");
    asked |= std::uint64_t{1} << s.var;
    ++cost;
    state->answer((x >> s.var) & 1u);
  }
}

QueryOrder QueryOrder::seeded(int n, std::uint64_t seed) {
  QueryOrder q;
  q.order.resize(static_cast<std::size_t>(n));
  std::iota(q.order.begin(), q.order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = q.order.size(); i > 1; --i) std::swap(q.order[i - 1], q.order[rng.below(i)]);
  return q;
}

DecisionStrategy naive_strategy(const TruthTable& f, const QueryOrder& order) {
  auto sub = std::make_shared<const SubFn>(SubFn::whole(f));
  Order ord = make_order(order, f.num_vars());
  return DecisionStrategy("naive", f.num_vars(), [sub, ord] { return std::make_unique<NaiveState>(*sub, ord); });
}

DecisionStrategy ecs_strategy(const TruthTable& f) {
  const int n = f.num_vars();
  const std::uint64_t m = f.weight();
  if (m < 1 || static_cast<double>(m) >= std::log2(static_cast<double>(n)))
    throw PreconditionError("ecs strategy needs 1 <= wt(f) < log n (wt = " + std::to_string(m) +
                            ", log n = " + log_n_text(n) + ")");
  auto sub = std::make_shared<const SubFn>(SubFn::whole(f));
  return DecisionStrategy("ecs", n, [sub] { return std::make_unique<EcsState>(*sub); });
}

DecisionStrategy partition_strategy(const TruthTable& f) {
  const int n = f.num_vars();
  const std::uint64_t m = f.weight();
  if (m < 1 || static_cast<double>(m) > 4 * std::log2(static_cast<double>(n)))
    throw PreconditionError("partition strategy needs 1 <= wt(f) <= 4 log n (wt = " + std::to_string(m) +
                            ", 4 log n = " + std::to_string(4 * std::log2(static_cast<double>(n))) + ")");
  Components comps = partition_components(SubFn::whole(f));
  return DecisionStrategy("partition", n, [comps] { return std::make_unique<OrState>(comps); });
}

int recursive_batch_size(std::uint64_t weight, int n) {
  const double r = static_cast<double>(weight) / std::log2(static_cast<double>(n));
  return static_cast<int>(std::ceil(std::log2(r) + std::log2(std::log2(r)) + 3));
}

DecisionStrategy recursive_strategy(const TruthTable& f, const QueryOrder& order) {
  auto sub = std::make_shared<const SubFn>(SubFn::whole(f));
  Order ord = make_order(order, f.num_vars());
  return DecisionStrategy("recursive", f.num_vars(),
                          [sub, ord] { return std::make_unique<RecursiveState>(*sub, ord); });
}

std::uint32_t restriction_query_set(int n, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw PreconditionError("p must lie in [0, 1]");
  Rng rng(seed, stream_tag::kRestrictions);
  std::uint32_t s = 0;
  for (int v = 0; v < n; ++v)
    if (rng.open_unit() < 1 - p) s |= 1u << v;
  return s;
}

DecisionStrategy restriction_strategy(const TruthTable& f, double p, std::uint64_t seed, const ExactConfig& config) {
  const std::uint32_t queries = restriction_query_set(f.num_vars(), p, seed);
  auto lattice = std::make_shared<const RestrictionLattice>(
      f, RestrictionLattice::Options{.cost = false, .depth = true, .size = false, .config = config});
  return restriction_from_lattice(std::move(lattice), queries, p);
}

DecisionStrategy block_or_strategy(const TruthTable& g, int blocks, int num_vars) {
  const int w = g.num_vars();
  if (num_vars < 0) num_vars = blocks * w;
  if (blocks < 1 || num_vars < blocks * w) throw PreconditionError("block OR needs 1 <= blocks <= n / w");
  if (num_vars > kMaxVars) throw LimitError("block OR exceeds the table limit");
  auto comps = std::make_shared<std::vector<ComponentFactory>>();
  for (int k = 0; k < blocks; ++k) {
    SubFn block{g, std::vector<int>(static_cast<std::size_t>(w))};
    std::iota(block.vars.begin(), block.vars.end(), k * w);
    auto part = std::make_shared<const SubFn>(std::move(block));
    comps->push_back([part](const Restriction& known) {
      SubFn s = *part;
      s.fix(known);
      return std::make_unique<NaiveState>(std::move(s), nullptr);
    });
  }
  Components c = comps;
  return DecisionStrategy("block-or", num_vars, [c] { return std::make_unique<OrState>(c); });
}

DecisionStrategy term_or_strategy(int n, const std::vector<Restriction>& terms) {
  auto comps = std::make_shared<std::vector<ComponentFactory>>();
  for (const auto& term : terms) {
    if (term.fixed >> n) throw PreconditionError("term mentions a variable beyond n");
    comps->push_back([term](const Restriction& known) {
      auto s = std::make_unique<TermState>(term);
      s->assume(known);
      return s;
    });
  }
  Components c = comps;
  return DecisionStrategy("term-or", n, [c] { return std::make_unique<OrState>(c); });
}

namespace {

struct ExactWalk {
  const TruthTable& f;
  const std::string& name;
  int n;
  std::uint64_t total = 0;
  int max_cost = 0;

  void walk(std::unique_ptr<StrategyState> state, Restriction known, int depth) {
    const Step s = state->next();
    if (s.done) {
      const std::uint32_t free = ~known.fixed & static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
      for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
        const std::uint64_t x = known.values | sub;
        if (f[x] != s.output) throw ZeroErrorViolation(name + " disagrees with f", x);
        if (sub == 0) break;
      }
      total += static_cast<std::uint64_t>(depth) << (n - known.support_size());
      max_cost = std::max(max_cost, depth);
      return;
    }
    if (s.var < 0 || s.var >= n) throw std::logic_error(name + ": query out of range");
    if (known.is_fixed(s.var)) throw std::logic_error(name + ": variable queried twice");
    auto zero = state->clone();
    zero->answer(false);
    walk(std::move(zero), known.with(s.var, false), depth + 1);
    state->answer(true);
    walk(std::move(state), known.with(s.var, true), depth + 1);
  }
};

}  // namespace

CostReport measure_exact(const DecisionStrategy& s, const TruthTable& f) {
  const int n = f.num_vars();
  if (n > kMaxMeasureVars) throw LimitError("exact measurement needs n <= " + std::to_string(kMaxMeasureVars));
  if (s.num_vars() != n) throw PreconditionError("strategy and function differ in n");
  ExactWalk w{f, s.name(), n};
  w.walk(s.start(), Restriction{}, 0);
  CostReport r;
  r.strategy = s.name();
  r.n = n;
  r.exact = ExactRational(static_cast<std::int64_t>(w.total), n);
  r.mean = r.exact->to_double();
  r.trials = f.size();
  r.max_cost = w.max_cost;
  return r;
}

CostReport measure_monte_carlo(const DecisionStrategy& s, const TruthTable& f, std::uint64_t trials,
                               std::uint64_t seed) {
  if (s.num_vars() != f.num_vars()) throw PreconditionError("strategy and function differ in n");
  if (trials == 0) throw PreconditionError("trials must be positive");
  std::vector<std::uint8_t> cost(trials);
  parallel_for(0, trials, 0, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(seed ^ stream_tag::kInputs, i);
      const std::uint64_t x = rng.below(f.size());
      const auto run = s.run(x);
      if (run.output != f[x]) throw ZeroErrorViolation(s.name() + " disagrees with f", x);
      cost[i] = static_cast<std::uint8_t>(run.cost);
    }
  });
  std::uint64_t sum = 0;
  int max_cost = 0;
  for (auto c : cost) {
    sum += c;
    max_cost = std::max<int>(max_cost, c);
  }
  CostReport r;
  r.strategy = s.name();
  r.n = f.num_vars();
  r.mean = static_cast<double>(sum) / static_cast<double>(trials);
  r.trials = trials;
  r.seed = seed;
  r.max_cost = max_cost;
  return r;
}

DecisionTree materialize(const DecisionStrategy& s) {
  if (s.num_vars() > kMaxMeasureVars) throw LimitError("materialization needs n <= 20");
  std::vector<DecisionTree::Node> nodes;
  std::function<int(std::unique_ptr<StrategyState>)> build = [&](std::unique_ptr<StrategyState> state) {
    const int at = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const Step step = state->next();
    if (step.done) {
      nodes[static_cast<std::size_t>(at)].value = step.output;
      return at;
    }
    nodes[static_cast<std::size_t>(at)].var = step.var;
    auto zero = state->clone();
    zero->answer(false);
    const int c0 = build(std::move(zero));
    state->answer(true);
    const int c1 = build(std::move(state));
    nodes[static_cast<std::size_t>(at)].child[0] = c0;
    nodes[static_cast<std::size_t>(at)].child[1] = c1;
    return at;
  };
  build(s.start());
  return DecisionTree(std::move(nodes));
}

RestrictionMeasurement measure_restriction_strategy(const TruthTable& f, double p, std::uint64_t samples,
                                                    std::uint64_t seed, const ExactConfig& config) {
  if (samples == 0) throw PreconditionError("samples must be positive");
  const int n = f.num_vars();
  auto lattice = std::make_shared<const RestrictionLattice>(
      f, RestrictionLattice::Options{.cost = false, .depth = true, .size = false, .config = config});
  std::vector<double> cost(samples), queried(samples), depth(samples);
  parallel_for(0, samples, config.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      const std::uint32_t s = restriction_query_set(n, p, seed ^ i);
      cost[i] = measure_exact(restriction_from_lattice(lattice, s, p), f).mean;
      queried[i] = std::popcount(s);
      std::uint64_t d = 0;
      for (std::uint32_t a = s;; a = (a - 1) & s) {
        d += static_cast<std::uint64_t>(lattice->depth(lattice->index_of(Restriction(s, a))));
        if (a == 0) break;
      }
      depth[i] = static_cast<double>(d) / static_cast<double>(std::uint64_t{1} << std::popcount(s));
    }
  });
  RestrictionMeasurement r;
  r.samples = samples;
  for (std::uint64_t i = 0; i < samples; ++i) {
    r.mean_cost += cost[i];
    r.mean_queried += queried[i];
    r.mean_restricted_depth += depth[i];
  }
  r.mean_cost /= static_cast<double>(samples);
  r.mean_queried /= static_cast<double>(samples);
  r.mean_restricted_depth /= static_cast<double>(samples);
  return r;
}

}  // namespace avgq
