#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace avgq {

inline constexpr int kMaxVars = 24;

// Complete table of a boolean function f : {0,1}^n -> {0,1}.
//
// Input x = (x_1, ..., x_n) lives at table index sum_i x_i * 2^(i-1), so x_1 is
// the least significant bit. Variables are 0-based in the API: variable v is
// x_{v+1} and corresponds to bit v of the index.
class TruthTable {
 public:
  TruthTable() : TruthTable(0) {}
  explicit TruthTable(int n, bool value = false);

  static TruthTable from_function(int n, const auto& fn) {
    TruthTable t(n);
    for (std::uint64_t x = 0; x < t.size(); ++x)
      if (fn(x)) t.set(x, true);
    return t;
  }
  // Table whose on-set is exactly `black_points`.
  static TruthTable from_on_set(int n, std::span<const std::uint64_t> black_points);

  int num_vars() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }

  bool operator[](std::uint64_t x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
  bool get(std::uint64_t x) const { return (*this)[x]; }
  void set(std::uint64_t x, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (v)
      words_[x >> 6] |= bit;
    else
      words_[x >> 6] &= ~bit;
  }

  std::uint64_t weight() const;
  bool is_constant() const;
  // Output value of a constant function; meaningless otherwise.
  bool constant_value() const { return weight() != 0; }

  // Black points in ascending table-index order.
  std::vector<std::uint64_t> on_set() const;

  TruthTable operator~() const;
  bool operator==(const TruthTable& other) const = default;

  std::span<const std::uint64_t> words() const { return words_; }
  // Raw 64-bit words; bits past 2^n in the last word must stay zero.
  std::span<std::uint64_t> mutable_words() { return words_; }

 private:
  void clear_padding();

  int n_;
  std::vector<std::uint64_t> words_;
};

std::uint64_t weight(const TruthTable& f);

// Partial assignment. `fixed` has bit v set when variable v is fixed; `values`
// holds the assigned bits and is zero outside `fixed`.
struct Restriction {
  std::uint32_t fixed = 0;
  std::uint32_t values = 0;

  Restriction() = default;
  Restriction(std::uint32_t fixed_mask, std::uint32_t value_bits)
      : fixed(fixed_mask), values(value_bits & fixed_mask) {}

  int support_size() const;
  bool is_fixed(int var) const { return (fixed >> var) & 1u; }
  bool value(int var) const { return (values >> var) & 1u; }
  Restriction with(int var, bool v) const;
  // Union of two restrictions; they must agree where both are fixed.
  Restriction merged(const Restriction& other) const;

  bool operator==(const Restriction&) const = default;
};

// The subfunction f|rho on the free variables, renumbered in ascending order of
// their original index.
TruthTable restrict(const TruthTable& f, const Restriction& rho);
TruthTable restrict(const TruthTable& f, int var, bool value);

inline constexpr int kMaxPathVars = 64;

// Ordered query path (variable, answer) with distinct variables. Count-only
// processes accept variables up to 63; prefix() needs them below kMaxVars.
class PathSpec {
 public:
  PathSpec() = default;
  explicit PathSpec(std::vector<std::pair<int, bool>> steps);

  std::size_t length() const { return steps_.size(); }
  const std::vector<std::pair<int, bool>>& steps() const { return steps_; }
  // The restriction fixing the first `j` steps.
  Restriction prefix(std::size_t j) const;

 private:
  std::vector<std::pair<int, bool>> steps_;
};

// Text format: line 1 holds n, line 2 either a 0/1 string of length 2^n or
// "hex:" followed by ceil(2^n/4) hex digits of the same bit string.
TruthTable parse_truth_table(std::string_view text);
std::string format_truth_table(const TruthTable& f);
std::string format_truth_table(const TruthTable& f, bool hex);

}  // namespace avgq
