#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "avgq/exact.hpp"
#include "avgq/truth_table.hpp"

namespace avgq {

// What a strategy does next: query a variable or stop with an output.
struct Step {
  bool done = false;
  int var = -1;
  bool output = false;

  static Step query(int v) { return {false, v, false}; }
  static Step stop(bool out) { return {true, -1, out}; }
};

// Position of an adaptive strategy after some answers. next() is idempotent;
// answer() supplies the value of the variable named by the pending query.
class StrategyState {
 public:
  virtual ~StrategyState() = default;
  virtual Step next() = 0;
  virtual void answer(bool value) = 0;
  virtual std::unique_ptr<StrategyState> clone() const = 0;
};

using StateFactory = std::function<std::unique_ptr<StrategyState>()>;

class DecisionStrategy {
 public:
  DecisionStrategy(std::string name, int num_vars, StateFactory factory)
      : name_(std::move(name)), n_(num_vars), factory_(std::move(factory)) {}

  const std::string& name() const { return name_; }
  int num_vars() const { return n_; }
  std::unique_ptr<StrategyState> start() const { return factory_(); }

  struct Run {
    bool output;
    int cost;
  };
  // Replays the strategy on input x.
  Run run(std::uint64_t x) const;

 private:
  std::string name_;
  int n_;
  StateFactory factory_;
};

// Optional variable order replacing "lowest free index first". Empty means
// ascending; otherwise a permutation of 0..n-1.
struct QueryOrder {
  std::vector<int> order;

  static QueryOrder seeded(int n, std::uint64_t seed);
};

// Queries free variables in order, stopping once the subfunction is constant.
DecisionStrategy naive_strategy(const TruthTable& f, const QueryOrder& order = {});

// Equivalent-coordinate-set procedure for sparse functions: query two members
// of a class of size >= 3, stop with 0 if they contradict the class polarity,
// query the smallest coordinate outside the class, repeat. Naive below n = 5
// or weight 3. Requires 1 <= wt(f) < log2 n.
DecisionStrategy ecs_strategy(const TruthTable& f);

// OR of eight near-equal blocks of the on-set, each evaluated with the ECS
// procedure on what is still unknown. Requires 1 <= wt(f) <= 4 log2 n.
inline constexpr int kPartitionBlocks = 8;
DecisionStrategy partition_strategy(const TruthTable& f);

// Three-branch recursion: naive once wt >= n, partition once wt <= 4 log2 n,
// otherwise query l = ceil(log r + log log r + 3) variables, r = wt / log2 n,
// and recurse on the subfunction.
DecisionStrategy recursive_strategy(const TruthTable& f, const QueryOrder& order = {});
int recursive_batch_size(std::uint64_t weight, int n);

// Queries each variable with probability 1 - p (chosen from `seed`), in
// ascending order, then follows a depth-optimal tree of the restricted
// function.
DecisionStrategy restriction_strategy(const TruthTable& f, double p, std::uint64_t seed,
                                      const ExactConfig& config = {});
// Variables queried up front by restriction_strategy(f, p, seed).
std::uint32_t restriction_query_set(int n, double p, std::uint64_t seed);

// OR over `blocks` contiguous copies of g (block k reads variables
// k*w .. k*w+w-1), each evaluated naively, skipping the rest once one is 1.
// num_vars may exceed blocks*w; the extra variables are never read.
DecisionStrategy block_or_strategy(const TruthTable& g, int blocks, int num_vars = -1);

// Gate-by-gate DNF evaluation: each term (a restriction it requires) is an AND
// of its literals in ascending variable order; stop on the first satisfied
// term; skip the rest of a term once a literal fails.
DecisionStrategy term_or_strategy(int n, const std::vector<Restriction>& terms);

inline constexpr int kMaxMeasureVars = 20;

struct CostReport {
  std::string strategy;
  int n = 0;
  std::optional<ExactRational> exact;  // set in exact mode
  double mean = 0;
  std::uint64_t trials = 0;            // inputs evaluated
  std::optional<std::uint64_t> seed;   // set in Monte Carlo mode
  int max_cost = 0;
};

// Exact expected cost over all 2^n inputs, walking the strategy tree once.
// Throws ZeroErrorViolation on a wrong output and std::logic_error on a repeated
// or out-of-range query.
CostReport measure_exact(const DecisionStrategy& s, const TruthTable& f);
// Mean cost over `trials` uniform inputs; input i is drawn from stream i of the
// seed. Outputs are checked on every sampled input.
CostReport measure_monte_carlo(const DecisionStrategy& s, const TruthTable& f, std::uint64_t trials,
                               std::uint64_t seed);

// Explicit tree for a deterministic strategy.
DecisionTree materialize(const DecisionStrategy& s);

// Restriction strategy averaged over `samples` query sets (seed ^ i), each
// measured exactly. statistics: mean cost, mean queried-set size, mean depth
// of the restricted function.
struct RestrictionMeasurement {
  double mean_cost = 0;
  double mean_queried = 0;
  double mean_restricted_depth = 0;
  std::uint64_t samples = 0;
};
RestrictionMeasurement measure_restriction_strategy(const TruthTable& f, double p, std::uint64_t samples,
                                                    std::uint64_t seed, const ExactConfig& config = {});

}  // namespace avgq
