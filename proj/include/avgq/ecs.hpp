#pragma once

#include <cstdint>
#include <vector>

#include "avgq/truth_table.hpp"

namespace avgq {

// One maximal equivalent coordinate set.
struct EcsClass {
  std::vector<int> members;  // ascending
  bool pure = false;         // every member's column pattern is constant
};

// Partition of the variables into maximal equivalent coordinate sets.
//
// Column patterns are read over the black points sorted lexicographically as
// tuples (x_1, ..., x_n), i.e. with x_1 most significant. Membership does not
// depend on that order; only the bit layout of column_bit() does.
class EcsPartition {
 public:
  explicit EcsPartition(const TruthTable& f);

  int num_vars() const { return static_cast<int>(class_of_.size()); }
  std::uint64_t num_black_points() const { return m_; }

  const std::vector<EcsClass>& classes() const { return classes_; }
  int class_of(int var) const { return class_of_[static_cast<std::size_t>(var)]; }
  // True when var's pattern is the complement of its class representative's
  // (the smallest member).
  bool negated(int var) const { return negated_[static_cast<std::size_t>(var)]; }
  bool positively_correlated(int a, int b) const;
  bool negatively_correlated(int a, int b) const;

  // Bit k of the column pattern c_var, k over black points in lexicographic order.
  bool column_bit(int var, std::uint64_t k) const;
  // Black points in the lexicographic order used for the patterns.
  const std::vector<std::uint64_t>& ordered_black_points() const { return points_; }

  // Largest class size.
  std::size_t max_class_size() const;

 private:
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> points_;
  std::vector<std::vector<std::uint64_t>> patterns_;
  std::vector<EcsClass> classes_;
  std::vector<int> class_of_;
  std::vector<bool> negated_;
};

// Throws PreconditionError on a zero-weight function.
EcsPartition ecs_partition(const TruthTable& f);

}  // namespace avgq
