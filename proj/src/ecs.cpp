#include "avgq/ecs.hpp"

#include <algorithm>
#include <map>

#include "avgq/errors.hpp"

namespace avgq {

namespace {

std::uint64_t reverse_bits(std::uint64_t x, int n) {
  std::uint64_t r = 0;
  for (int i = 0; i < n; ++i) r |= ((x >> i) & 1u) << (n - 1 - i);
  return r;
}

}  // namespace

EcsPartition::EcsPartition(const TruthTable& f) {
  const int n = f.num_vars();
  points_ = f.on_set();
  m_ = points_.size();
  if (m_ == 0) throw PreconditionError("column patterns are undefined for the zero function");
  std::sort(points_.begin(), points_.end(), [n](std::uint64_t a, std::uint64_t b) {
    return reverse_bits(a, n) < reverse_bits(b, n);
  });

  const std::size_t words = (m_ + 63) / 64;
  const std::uint64_t tail_mask = (m_ % 64) ? ((std::uint64_t{1} << (m_ % 64)) - 1) : ~std::uint64_t{0};
  patterns_.assign(static_cast<std::size_t>(n), std::vector<std::uint64_t>(words, 0));
  for (std::uint64_t k = 0; k < m_; ++k)
    for (int i = 0; i < n; ++i)
      if ((points_[k] >> i) & 1u) patterns_[static_cast<std::size_t>(i)][k >> 6] |= std::uint64_t{1} << (k & 63);

  class_of_.assign(static_cast<std::size_t>(n), -1);
  negated_.assign(static_cast<std::size_t>(n), false);
  // Canonical form: the pattern or its complement, whichever starts with 0.
  std::map<std::vector<std::uint64_t>, int> index;
  for (int i = 0; i < n; ++i) {
    auto canon = patterns_[static_cast<std::size_t>(i)];
    const bool flip = canon[0] & 1u;
    if (flip) {
      for (auto& w : canon) w = ~w;
      canon.back() &= tail_mask;
    }
    auto [it, inserted] = index.try_emplace(canon, static_cast<int>(classes_.size()));
    if (inserted) {
      bool zero = std::all_of(canon.begin(), canon.end(), [](std::uint64_t w) { return w == 0; });
      classes_.push_back(EcsClass{{}, zero});
    }
    auto& cls = classes_[static_cast<std::size_t>(it->second)];
    cls.members.push_back(i);
    class_of_[static_cast<std::size_t>(i)] = it->second;
    negated_[static_cast<std::size_t>(i)] = flip;
  }
  // Polarity is reported relative to each class's smallest member.
  for (auto& cls : classes_) {
    const bool base = negated_[static_cast<std::size_t>(cls.members.front())];
    for (int v : cls.members) negated_[static_cast<std::size_t>(v)] = negated_[static_cast<std::size_t>(v)] != base;
  }
}

bool EcsPartition::positively_correlated(int a, int b) const {
  return class_of(a) == class_of(b) && negated(a) == negated(b);
}

bool EcsPartition::negatively_correlated(int a, int b) const {
  return class_of(a) == class_of(b) && negated(a) != negated(b);
}

bool EcsPartition::column_bit(int var, std::uint64_t k) const {
  return (patterns_[static_cast<std::size_t>(var)][k >> 6] >> (k & 63)) & 1u;
}

std::size_t EcsPartition::max_class_size() const {
  std::size_t best = 0;
  for (const auto& c : classes_) best = std::max(best, c.members.size());
  return best;
}

EcsPartition ecs_partition(const TruthTable& f) { return EcsPartition(f); }

}  // namespace avgq
