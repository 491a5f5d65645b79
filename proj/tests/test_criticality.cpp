#include <cmath>

#include "avgq/criticality.hpp"
#include "avgq/errors.hpp"
#include "avgq/families.hpp"
#include "avgq/strategies.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace avgq;
using namespace avgq::testing;
using boost::multiprecision::cpp_int;

namespace {

// Tail by enumerating every restriction with the test-only restrict oracle.
std::vector<Rational> tail_oracle(const TruthTable& f, const Rational& p) {
  const int n = f.num_vars();
  std::vector<Rational> at(static_cast<std::size_t>(n) + 1, Rational(0));
  for (std::uint32_t fixed = 0; fixed < (1u << n); ++fixed)
    for (std::uint32_t vals = fixed;; vals = (vals - 1) & fixed) {
      const int k = n - std::popcount(fixed);
      Rational pr = 1;
      for (int i = 0; i < k; ++i) pr *= p;
      for (int i = k; i < n; ++i) pr *= (1 - p) / 2;
      at[static_cast<std::size_t>(worst_depth(restrict_oracle(f, fixed, vals)))] += pr;
      if (vals == 0) break;
    }
  std::vector<Rational> tail(at.size(), Rational(0));
  Rational acc = 0;
  for (int t = n; t >= 0; --t) tail[static_cast<std::size_t>(t)] = acc += at[static_cast<std::size_t>(t)];
  return tail;
}

cpp_int choose(int n, int k) {
  cpp_int r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/30") == Rational(1, 30));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(rational_text(Rational(6, 4)) == "3/2");
  CHECK(rational_text(Rational(2)) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("a/3"), ParseError);
  CHECK_THROWS_AS(parse_rational("-1"), ParseError);
}

TEST_CASE("restriction tail examples") {
  const auto c = restriction_tail(TruthTable(6, true), Rational(1, 3));
  CHECK(c.tail[0] == 1);
  for (int t = 1; t <= 6; ++t) CHECK(c.tail[static_cast<std::size_t>(t)] == 0);

  for (int n = 1; n <= 9; ++n) {
    const Rational p(2, 7);
    const auto x = restriction_tail(xor_table(n), p);
    for (int t = 0; t <= n; ++t) {
      Rational expect = 0;
      for (int k = t; k <= n; ++k) {
        Rational term = Rational(choose(n, k));
        for (int i = 0; i < k; ++i) term *= p;
        for (int i = k; i < n; ++i) term *= 1 - p;
        expect += term;
      }
      CHECK(x.tail[static_cast<std::size_t>(t)] == expect);
    }
  }

  const auto a = restriction_tail(and_table(2), Rational(1, 2));
  CHECK(a.tail[1] == Rational(1, 2));
  CHECK(a.tail[2] == Rational(1, 4));
  CHECK(a.tail == tail_oracle(and_table(2), Rational(1, 2)));
  CHECK_THROWS_AS(restriction_tail(xor_table(13), Rational(1, 2)), LimitError);
  CHECK_THROWS_AS(restriction_tail(xor_table(3), Rational(3, 2)), PreconditionError);
}

TEST_CASE("restriction tail against enumeration") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const TruthTable f = random_table(1 + trial % 5, rng);
    const Rational p(1 + static_cast<int>(rng() % 9), 10);
    const auto rt = restriction_tail(f, p);
    CHECK(rt.tail == tail_oracle(f, p));
    CHECK(rt.total_mass == 1);
    for (std::size_t t = 1; t < rt.tail.size(); ++t) CHECK(rt.tail[t] <= rt.tail[t - 1]);
  }
}

TEST_CASE("lambda estimate") {
  const auto grid = default_p_grid();
  REQUIRE(grid.size() == 10);
  CHECK(grid.front() == Rational(1, 2));
  CHECK(grid.back() == Rational(1, 1024));
  CHECK(lambda_estimate(TruthTable(5, false), grid).lambda == 1);

  for (int n : {3, 6, 10}) {
    const auto est = lambda_estimate(xor_table(n), grid);
    for (const auto& p : grid) {
      const double pd = static_cast<double>(p);
      CHECK(est.lambda >= (1 - std::pow(1 - pd, n)) / pd * (1 - 1e-12));
    }
    CHECK(est.lambda <= n);
    CHECK(est.lambda >= n * 0.99);
    CHECK(!est.witnesses.empty());
  }
  CHECK_THROWS_AS(lambda_estimate(xor_table(3), {}), PreconditionError);
}

TEST_CASE("criticality definition holds on the grid with the estimate") {
  Rng rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const DnfFormula phi = random_dnf(10, 1 + static_cast<int>(rng.below(8)), 3, rng);
    const TruthTable f = dnf_to_table(phi);
    const auto est = lambda_estimate(f, default_p_grid());
    const DepthProfile profile(f);
    for (const auto& p : default_p_grid()) {
      const auto rt = profile.tail(p);
      CHECK(rt.total_mass == 1);
      for (int t = 1; t <= 10; ++t)
        CHECK(static_cast<double>(rt.tail[static_cast<std::size_t>(t)]) <=
              std::pow(static_cast<double>(p) * est.lambda, t) * (1 + 1e-9));
    }
    CHECK(dave_exact(f).to_double() <= lemma43_bound(10, est.lambda));
  }
}

TEST_CASE("restriction strategy at the lemma's p") {
  Rng rng(29);
  for (int trial = 0; trial < 4; ++trial) {
    const DnfFormula phi = random_dnf(10, 4, 3, rng);
    const TruthTable f = dnf_to_table(phi);
    const double lambda = lambda_estimate(f, default_p_grid()).lambda;
    const double p = lemma43_restriction_p(10, lambda);
    const std::uint64_t samples = 300;
    const auto r = measure_restriction_strategy(f, p, samples, rng.next());
    CHECK(r.mean_cost <= lemma43_bound(10, lambda) + 3 * 10 / std::sqrt(double(samples)));
  }
}

TEST_CASE("bound calculators") {
  CHECK(lemma43_bound(16, 4) == doctest::Approx(16.0));
  for (int n : {1, 5, 30}) {
    CHECK(lemma43_bound(n, n) == doctest::Approx(n + 1.0));
    CHECK(lemma43_bound(n, 1) == doctest::Approx(2 * std::sqrt(double(n))));
  }
  CHECK_THROWS_AS(lemma43_bound(4, 0.5), PreconditionError);
  CHECK(lemma43_restriction_p(16, 16) == 0);
  CHECK(lemma43_restriction_p(16, 4) == doctest::Approx(0.125));

  CHECK(corollary_bound(CorollaryKind::kWidth, 16, 1, 4) == doctest::Approx(12.0));
  CHECK(corollary_bound(CorollaryKind::kSize, 16, 1, 16) == doctest::Approx(12.0));
  CHECK(corollary_bound(CorollaryKind::kCircuit, 16, 1, 16, 3) == doctest::Approx(15.0));
  CHECK(corollary_bound(CorollaryKind::kFormula, 16, 2, 16, 2) == doctest::Approx(12.0));
  CHECK_THROWS_AS(corollary_bound(CorollaryKind::kCircuit, 16, 1, 16, 1), PreconditionError);
  CHECK_THROWS_AS(corollary_bound(CorollaryKind::kWidth, 16, 0, 4), PreconditionError);
}

TEST_CASE("prop41 check") {
  const auto single = prop41_check(dnf_parse("n=6\nx1 !x3 x6\n"));
  CHECK(single.pass);
  CHECK(single.cost.mean <= 2.0);
  const auto pt = prop41_check(canonical_dnf(point_table(8, 77)));
  CHECK(pt.bound == 4.0);
  CHECK(pt.cost.mean <= 4.0);
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(10));
    const int w = 1 + static_cast<int>(rng.below(std::min(n, 5)));
    const auto phi = random_dnf(n, 1 + static_cast<int>(rng.below(8)), w, rng);
    const auto r = prop41_check(phi);
    CHECK(r.pass);
    CHECK(r.cost.mean <= 2.0 * (phi.size() + 1));
  }
  const auto three = prop41_check(random_dnf(9, 3, 3, rng));
  CHECK(three.cost.mean <= 8.0);
}
