#include <cmath>

#include "avgq/errors.hpp"
#include "avgq/exact.hpp"
#include "avgq/parallel.hpp"
#include "avgq/randgen.hpp"
#include "avgq/strategies.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace avgq;
using namespace avgq::testing;

namespace {

ExactRational exact_cost(const DecisionStrategy& s, const TruthTable& f) { return *measure_exact(s, f).exact; }

bool same_tree(const DecisionTree& a, const DecisionTree& b) {
  if (a.nodes().size() != b.nodes().size()) return false;
  for (std::size_t i = 0; i < a.nodes().size(); ++i) {
    const auto &x = a.nodes()[i], &y = b.nodes()[i];
    if (x.var != y.var || x.value != y.value || x.child[0] != y.child[0] || x.child[1] != y.child[1]) return false;
  }
  return true;
}

// Deliberately wrong strategies for the failure paths.
class AlwaysZero final : public StrategyState {
 public:
  Step next() override { return Step::stop(false); }
  void answer(bool) override {}
  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<AlwaysZero>(*this); }
};

class Stubborn final : public StrategyState {
 public:
  Step next() override { return asked_ < 2 ? Step::query(0) : Step::stop(false); }
  void answer(bool) override { ++asked_; }
  std::unique_ptr<StrategyState> clone() const override { return std::make_unique<Stubborn>(*this); }

 private:
  int asked_ = 0;
};

}  // namespace

TEST_CASE("naive strategy examples") {
  CHECK(exact_cost(naive_strategy(and_table(2)), and_table(2)) == ExactRational(3, 1));
  for (int n = 1; n <= 10; ++n) CHECK(exact_cost(naive_strategy(xor_table(n)), xor_table(n)) == ExactRational(n, 0));
  for (int n = 1; n <= 12; ++n) {
    const TruthTable pt = point_table(n, (0x5a5u * n) & ((1u << n) - 1));
    CHECK(exact_cost(naive_strategy(pt), pt) == ExactRational((std::int64_t{1} << (n + 1)) - 2, n));
  }
}

TEST_CASE("every strategy costs nothing on a constant") {
  for (bool b : {false, true}) {
    const TruthTable c(6, b);
    CHECK(measure_exact(naive_strategy(c), c).mean == 0);
    CHECK(measure_exact(recursive_strategy(c), c).mean == 0);
    CHECK(measure_exact(block_or_strategy(TruthTable(3, b), 2), c).mean == 0);
  }
  CHECK(measure_exact(term_or_strategy(5, {}), TruthTable(5)).mean == 0);
}

TEST_CASE("naive strategy meets log wt + 2") {
  std::mt19937_64 rng(31);
  for (std::uint64_t m : {4, 16, 256}) {
    for (int trial = 0; trial < 40; ++trial) {
      const TruthTable f = sample_fixed_weight(12, m, rng());
      CHECK(measure_exact(naive_strategy(f), f).mean <= std::log2(double(m)) + 2);
    }
  }
}

TEST_CASE("seeded query order keeps zero error and the bound") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const TruthTable f = sample_fixed_weight(10, 32, rng());
    const auto order = QueryOrder::seeded(10, rng());
    CHECK(measure_exact(naive_strategy(f, order), f).mean <= std::log2(32.0) + 2);
    CHECK(measure_exact(recursive_strategy(f, order), f).max_cost <= 10);
  }
  CHECK_THROWS_AS(naive_strategy(xor_table(3), QueryOrder{{0, 0, 1}}), PreconditionError);
}

TEST_CASE("ECS strategy") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 120; ++trial) {
    const std::uint64_t m = 1 + trial % 3;
    const TruthTable f = sample_fixed_weight(12, m, rng());
    const auto rep = measure_exact(ecs_strategy(f), f);
    CHECK(rep.mean <= 5.0);
    CHECK(rep.max_cost <= 12);
  }
  // Weight one falls back to naive, which costs exactly 2(1 - 2^-n).
  const TruthTable pt = point_table(12, 1234);
  CHECK(exact_cost(ecs_strategy(pt), pt) == ExactRational((1 << 13) - 2, 12));

  try {
    ecs_strategy(sample_fixed_weight(12, 4, 1));
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("wt(f) < log n") != std::string::npos);
  }
  CHECK_THROWS_AS(ecs_strategy(TruthTable(12)), PreconditionError);
}

TEST_CASE("ECS strategy exercises the class step") {
  // Black points 0...0 and 1...1 plus one more: most coordinates form one
  // positively correlated class, so the pair queries run.
  const int n = 12;
  const std::uint64_t all = (1u << n) - 1;
  const std::uint64_t pts[] = {0, all, 0b11};
  const TruthTable f = TruthTable::from_on_set(n, pts);
  const auto tree = materialize(ecs_strategy(f));
  CHECK(tree.computes(f));
  CHECK(tree.root().var == 2);  // smallest member of the large class {2..11}
  CHECK(tree.nodes()[static_cast<std::size_t>(tree.root().child[0])].var == 3);
  CHECK(measure_exact(ecs_strategy(f), f).mean <= 5.0);
}

TEST_CASE("partition strategy") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const TruthTable f = sample_fixed_weight(16, 16, rng());
    CHECK(measure_exact(partition_strategy(f), f).mean <= 40.0);
  }
  // Weight 8: eight singleton blocks, each a point function.
  const TruthTable f = sample_fixed_weight(16, 8, 5);
  const double cost = measure_exact(partition_strategy(f), f).mean;
  CHECK(cost <= 8 * 2.0);
  CHECK_THROWS_AS(partition_strategy(sample_fixed_weight(16, 17, 1)), PreconditionError);
}

TEST_CASE("recursive strategy") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 8; ++trial) {
    const TruthTable f = sample_fixed_weight(16, 2048, rng());
    const double r = 2048.0 / 4;
    CHECK(measure_exact(recursive_strategy(f), f).mean <= std::log2(r) + std::log2(std::log2(r)) + 87);
  }
  // wt >= n is the naive branch, decision for decision.
  for (int trial = 0; trial < 10; ++trial) {
    const TruthTable f = sample_fixed_weight(9, 9 + trial * 20, rng());
    CHECK(same_tree(materialize(recursive_strategy(f)), materialize(naive_strategy(f))));
  }
  CHECK(recursive_batch_size(2048, 16) == static_cast<int>(std::ceil(9 + std::log2(9.0) + 3)));
}

TEST_CASE("no strategy beats the optimum") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5 + trial % 4;
    const TruthTable f = random_weight_table(n, 1 + rng() % 12, rng);
    const ExactRational best = dave_exact(f);
    CHECK(best <= exact_cost(naive_strategy(f), f));
    CHECK(best <= exact_cost(recursive_strategy(f), f));
    if (f.weight() <= 4 * std::log2(double(n))) CHECK(best <= exact_cost(partition_strategy(f), f));
  }
}

TEST_CASE("restriction strategy") {
  for (double p : {0.0, 0.3, 0.5, 1.0})
    for (std::uint64_t seed = 0; seed < 5; ++seed)
      CHECK(exact_cost(restriction_strategy(xor_table(8), p, seed), xor_table(8)) == ExactRational(8, 0));

  const TruthTable c(8, true);
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    CHECK(measure_exact(restriction_strategy(c, 0.25, seed), c).mean ==
          std::popcount(restriction_query_set(8, 0.25, seed)));
  const auto rc = measure_restriction_strategy(c, 0.25, 4000, 9);
  CHECK(std::abs(rc.mean_cost - 8 * 0.75) <= 3 * std::sqrt(8 * 0.25 * 0.75 / 4000));

  // Cost splits into the queried set plus at most the restricted depth; XOR
  // attains it.
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    const TruthTable f = random_table(9, rng);
    const auto r = measure_restriction_strategy(f, 0.4, 50, rng());
    CHECK(r.mean_cost - r.mean_queried <= r.mean_restricted_depth + 1e-9);
  }
  const auto rx = measure_restriction_strategy(xor_table(9), 0.4, 50, 3);
  CHECK(rx.mean_cost - rx.mean_queried == doctest::Approx(rx.mean_restricted_depth));
  CHECK_THROWS_AS(restriction_strategy(xor_table(9), 0.5, 0, ExactConfig{8, 1}), LimitError);
}

TEST_CASE("Monte Carlo agrees with exact measurement") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    const TruthTable f = random_table(10, rng);
    const auto s = naive_strategy(f);
    const double exact = measure_exact(s, f).mean;
    const std::uint64_t trials = 4000;
    const auto mc = measure_monte_carlo(s, f, trials, rng());
    CHECK(std::abs(mc.mean - exact) <= 3 * std::sqrt(100.0 / trials));
    CHECK(mc.mean >= 0);
    CHECK(mc.mean <= 10);
  }
  const TruthTable f = random_table(12, rng);
  set_default_threads(1);
  const double one = measure_monte_carlo(recursive_strategy(f), f, 5000, 4).mean;
  set_default_threads(3);
  const double three = measure_monte_carlo(recursive_strategy(f), f, 5000, 4).mean;
  set_default_threads(1);
  CHECK(one == three);
}

TEST_CASE("measurement rejects wrong strategies") {
  const TruthTable f = point_table(4, 9);
  const DecisionStrategy zero("zero", 4, [] { return std::make_unique<AlwaysZero>(); });
  try {
    measure_exact(zero, f);
    FAIL("expected a zero-error violation");
  } catch (const ZeroErrorViolation& e) {
    CHECK(e.witness() == 9);
  }
  CHECK_THROWS_AS(measure_monte_carlo(zero, f, 1000, 1), ZeroErrorViolation);
  const DecisionStrategy stubborn("stubborn", 4, [] { return std::make_unique<Stubborn>(); });
  CHECK_THROWS_AS(measure_exact(stubborn, TruthTable(4)), std::logic_error);
  CHECK_THROWS_AS(stubborn.run(3), std::logic_error);
  CHECK_THROWS_AS(measure_exact(naive_strategy(f), TruthTable(5)), PreconditionError);
}

TEST_CASE("materialized trees match procedural measurement") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const TruthTable f = random_weight_table(8, 1 + rng() % 40, rng);
    for (const auto& s : {naive_strategy(f), recursive_strategy(f)}) {
      const auto tree = materialize(s);
      CHECK(tree.computes(f));
      CHECK(tree.is_reasonable_shape());
      CHECK(tree.expected_cost(8) == *measure_exact(s, f).exact);
      for (std::uint64_t x = 0; x < 256; x += 17) CHECK(tree.evaluate(x).cost == s.run(x).cost);
    }
  }
}

TEST_CASE("block OR and term OR") {
  const TruthTable g = and_table(3);
  const TruthTable f = TruthTable::from_function(9, [&](std::uint64_t x) {
    return g[x & 7] || g[(x >> 3) & 7] || g[(x >> 6) & 7];
  });
  CHECK(measure_exact(block_or_strategy(g, 3), f).mean <= 3 * 2.0);

  // (x1 & !x2) | (x3) | (x2 & x4)
  const std::vector<Restriction> terms = {Restriction(0b0011, 0b0001), Restriction(0b0100, 0b0100),
                                          Restriction(0b1010, 0b1010)};
  const TruthTable dnf = TruthTable::from_function(4, [](std::uint64_t x) {
    return (bit(x, 0) && !bit(x, 1)) || bit(x, 2) || (bit(x, 1) && bit(x, 3));
  });
  const auto rep = measure_exact(term_or_strategy(4, terms), dnf);
  CHECK(rep.mean <= 2 * 4.0);
  // x1 = x2 = 1 fails term one after two queries; term three reuses x2.
  CHECK(term_or_strategy(4, terms).run(0b1011).cost == 4);
  CHECK(term_or_strategy(4, terms).run(0b1011).output);
}
