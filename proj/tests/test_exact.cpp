#include <cmath>
#include <numeric>
#include <random>

#include "avgq/certificate.hpp"
#include "avgq/errors.hpp"
#include "avgq/exact.hpp"
#include "avgq/parallel.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace avgq;
using namespace avgq::testing;

TEST_CASE("exact rational") {
  CHECK(ExactRational(6, 2) == ExactRational(3, 1));
  CHECK(ExactRational(7, 2) < ExactRational(2, 0));
  CHECK(ExactRational(104, 5).fraction() == "104/32");
  CHECK(ExactRational(104, 5).reduced().fraction() == "13/4");
  CHECK(ExactRational(104, 5).decimal() == "3.25");
  CHECK(ExactRational(1, 3).decimal() == "0.125");
}

TEST_CASE("dave_exact examples") {
  CHECK(dave_exact(point_table(3, 0b101)) == ExactRational(7, 2));
  CHECK(dave_exact(xor_table(6)) == ExactRational(6, 0));
  CHECK(dave_exact(pso_oracle(2)) == ExactRational(13, 2));
  CHECK(dave_exact(TruthTable(4, true)) == ExactRational(0, 0));
  CHECK(dave_exact(and_table(2)) == ExactRational(3, 1));
}

TEST_CASE("worst_depth and dtsize_min examples") {
  CHECK(worst_depth(pso_oracle(3)) == 7);
  CHECK(worst_depth(xor_table(5)) == 5);
  CHECK(worst_depth(TruthTable(3)) == 0);
  CHECK(dtsize_min(TruthTable(3, true)) == 1);
  CHECK(dtsize_min(xor_table(2)) == 4);
  CHECK(dtsize_min(and_table(2)) == 3);
}

TEST_CASE("DP limit is enforced") {
  CHECK_THROWS_AS(dave_exact(TruthTable(15)), LimitError);
  const ExactConfig small{8, 1};
  CHECK_NOTHROW(dave_exact(TruthTable(8), small));
  CHECK_THROWS_AS(dave_exact(TruthTable(9), small), LimitError);
}

TEST_CASE("optimal tree witness") {
  auto leaf = optimal_tree(TruthTable(2, true));
  REQUIRE(leaf.nodes().size() == 1);
  CHECK(leaf.root().is_leaf());
  CHECK(leaf.root().value);

  auto t = optimal_tree(and_table(2));
  CHECK(t.root().var == 0);  // both roots cost 3/2; lowest index wins
  CHECK(t.expected_cost(2) == ExactRational(3, 1));

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 10);
    auto f = random_table(n, rng);
    auto tree = optimal_tree(f);
    CHECK(tree.is_reasonable_shape());
    CHECK(tree.computes(f));
    CHECK(tree.expected_cost(n) == dave_exact(f));
  }
}

TEST_CASE("brute force oracle agrees with the DP") {
  for (std::uint64_t bits = 0; bits < 16; ++bits) {
    TruthTable f(2);
    for (std::uint64_t x = 0; x < 4; ++x) f.set(x, (bits >> x) & 1u);
    CHECK(brute_force_dave(f) == dave_exact(f));
  }
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    auto f = random_table(3, rng);
    CHECK(brute_force_dave(f) == dave_exact(f));
  }
  CHECK(brute_force_dave(xor_table(3)) == ExactRational(3, 0));
  CHECK(brute_force_dave(TruthTable(3)) == ExactRational(0, 0));
  CHECK_THROWS_AS(brute_force_dave(TruthTable(4)), LimitError);
}

TEST_CASE("sandwich: min certificate <= D_ave <= D <= n and the OS inequality") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 9);
    auto f = rep % 2 ? random_table(n, rng) : random_weight_table(n, 1 + rng() % (std::uint64_t{1} << (n - 1)), rng);
    if (f.is_constant()) continue;
    const auto dave = dave_exact(f);
    const int depth = worst_depth(f);
    CHECK(ExactRational(min_certificate(f), 0) <= dave);
    CHECK(dave <= ExactRational(depth, 0));
    CHECK(depth <= n);
    CHECK(dave.to_double() <= std::log2(static_cast<double>(dtsize_min(f))) + 1e-12);
  }
}

TEST_CASE("symmetry invariance") {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 6);
    auto f = random_table(n, rng);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const int v = static_cast<int>(rng() % static_cast<unsigned>(n));
    for (const auto& g : {permute_vars(f, perm), ~f, flip_input(f, v)}) {
      CHECK(dave_exact(g) == dave_exact(f));
      CHECK(worst_depth(g) == worst_depth(f));
      CHECK(dtsize_min(g) == dtsize_min(f));
    }
  }
}

TEST_CASE("lattice results do not depend on the thread count") {
  std::mt19937_64 rng(21);
  auto f = random_weight_table(9, 40, rng);
  RestrictionLattice one(f, {true, true, true, ExactConfig{kDefaultDpLimit, 1}});
  RestrictionLattice four(f, {true, true, true, ExactConfig{kDefaultDpLimit, 4}});
  for (std::uint64_t s = 0; s < one.state_count(); ++s) {
    CHECK(one.weight(s) == four.weight(s));
    CHECK(one.total_cost(s) == four.total_cost(s));
    CHECK(one.depth(s) == four.depth(s));
    CHECK(one.leaves(s) == four.leaves(s));
    CHECK(one.cost_choice(s) == four.cost_choice(s));
  }
}

TEST_CASE("lattice addressing") {
  auto f = and_table(3);
  RestrictionLattice lat(f);
  CHECK(lat.index_of(Restriction()) == lat.root());
  const auto s = lat.index_of(Restriction(0b010, 0b010));
  CHECK(s == lat.child(lat.root(), 1, true));
  CHECK(lat.free_mask(s) == 0b101);
  CHECK(lat.weight(s) == 1);
  CHECK(lat.is_constant(lat.index_of(Restriction(0b001, 0))));
}
