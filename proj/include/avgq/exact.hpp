#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "avgq/truth_table.hpp"

namespace avgq {

// Default cap on n for the 3^n restriction-lattice programs.
inline constexpr int kDefaultDpLimit = 14;
inline constexpr int kMaxDpLimit = 16;

struct ExactConfig {
  int dp_limit = kDefaultDpLimit;
  int threads = 0;  // 0: default_threads()
};

// numerator / 2^exponent, exact. Expected costs are kept as total cost over all
// inputs divided by 2^n.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(std::int64_t numerator, int exponent);

  std::int64_t numerator() const { return num_; }
  int exponent() const { return exp_; }
  std::uint64_t denominator() const { return std::uint64_t{1} << exp_; }

  // Lowest terms (the denominator is still a power of two).
  ExactRational reduced() const;
  double to_double() const;
  // "num/den" with the stored (unreduced) denominator.
  std::string fraction() const;
  // Twelve significant digits.
  std::string decimal() const;

  friend bool operator==(const ExactRational& a, const ExactRational& b);
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b);

 private:
  std::int64_t num_ = 0;
  int exp_ = 0;
};

// Explicit decision tree. Node 0 is the root.
class DecisionTree {
 public:
  struct Node {
    int var = -1;  // -1 for a leaf
    bool value = false;
    int child[2] = {-1, -1};
    bool is_leaf() const { return var < 0; }
  };

  DecisionTree() = default;
  explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_.front(); }

  struct Evaluation {
    bool output;
    int cost;
  };
  Evaluation evaluate(std::uint64_t x) const;
  int depth() const;
  std::uint64_t leaf_count() const;
  // No variable repeats along any root-to-leaf path.
  bool is_reasonable_shape() const;
  // Exact expected cost under uniform inputs on n variables.
  ExactRational expected_cost(int n) const;
  bool computes(const TruthTable& f) const;

 private:
  std::vector<Node> nodes_;
};

// Tables over all 3^n restrictions. A restriction is addressed by its base-3
// index sum_v d_v 3^v, where d_v is 0 or 1 for a fixed variable and 2 for a
// free one; the all-free restriction is 3^n - 1. Children of a state have
// smaller indices, so a single ascending sweep evaluates every recursion.
class RestrictionLattice {
 public:
  struct Options {
    bool cost = true;   // total query cost (average depth times 2^free)
    bool depth = true;  // worst-case depth
    bool size = true;   // minimum leaf count
    ExactConfig config{};
  };

  explicit RestrictionLattice(const TruthTable& f) : RestrictionLattice(f, Options{}) {}
  RestrictionLattice(const TruthTable& f, Options options);

  int num_vars() const { return n_; }
  std::uint64_t state_count() const { return states_; }
  std::uint64_t root() const { return states_ - 1; }
  std::uint64_t index_of(const Restriction& rho) const;
  std::uint64_t child(std::uint64_t state, int var, bool value) const {
    return state - (value ? 1 : 2) * pow3_[static_cast<std::size_t>(var)];
  }
  std::uint32_t free_mask(std::uint64_t state) const { return free_[state]; }

  std::uint32_t weight(std::uint64_t s) const { return weight_[s]; }
  bool is_constant(std::uint64_t s) const;
  // Output value of a constant state.
  bool constant_value(std::uint64_t s) const { return weight_[s] != 0; }
  std::uint64_t total_cost(std::uint64_t s) const { return cost_.at(s); }
  int depth(std::uint64_t s) const { return depth_.at(s); }
  std::uint64_t leaves(std::uint64_t s) const { return leaves_.at(s); }
  // Lowest-index variable attaining the optimum (-1 at constant states).
  int cost_choice(std::uint64_t s) const { return cost_choice_.at(s); }
  int depth_choice(std::uint64_t s) const { return depth_choice_.at(s); }

 private:
  void evaluate(std::uint64_t s);

  int n_;
  std::uint64_t states_;
  std::vector<std::uint64_t> pow3_;
  Options options_;
  const TruthTable* f_;
  std::vector<std::uint32_t> free_;
  std::vector<std::uint32_t> weight_;
  std::vector<std::uint32_t> cost_;
  std::vector<std::uint8_t> depth_;
  std::vector<std::uint32_t> leaves_;
  std::vector<std::int8_t> cost_choice_;
  std::vector<std::int8_t> depth_choice_;
};

ExactRational dave_exact(const TruthTable& f, const ExactConfig& config = {});
int worst_depth(const TruthTable& f, const ExactConfig& config = {});
std::uint64_t dtsize_min(const TruthTable& f, const ExactConfig& config = {});
// A tree attaining dave_exact; ties go to the lowest variable index.
DecisionTree optimal_tree(const TruthTable& f, const ExactConfig& config = {});
// Exhaustive minimum over every reasonable tree; n <= 3 only.
ExactRational brute_force_dave(const TruthTable& f);

}  // namespace avgq
