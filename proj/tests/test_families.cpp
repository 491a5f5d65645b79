#include <cmath>

#include "avgq/certificate.hpp"
#include "avgq/errors.hpp"
#include "avgq/exact.hpp"
#include "avgq/families.hpp"
#include "avgq/randgen.hpp"
#include "avgq/strategies.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace avgq;
using namespace avgq::testing;

TEST_CASE("named functions") {
  CHECK(make_named({NamedKind::kXor}, 3).weight() == 4);
  CHECK(make_named({NamedKind::kXor}, 7) == xor_table(7));
  const TruthTable a4 = make_named({NamedKind::kAnd}, 4);
  CHECK(a4.weight() == 1);
  CHECK(a4[15]);
  CHECK(make_named({NamedKind::kOr}, 5) == or_table(5));
  for (std::uint64_t z : {0, 5, 31}) {
    const TruthTable p = make_named({NamedKind::kPoint, z}, 5);
    CHECK(p.weight() == 1);
    CHECK(p[z]);
  }
  CHECK(make_named({NamedKind::kConstant, 0, true}, 3) == TruthTable(3, true));
  CHECK_THROWS_AS(make_named({NamedKind::kPoint, 8}, 3), PreconditionError);
  CHECK_THROWS_AS(make_named({NamedKind::kAnd}, 0), PreconditionError);
  CHECK(parse_named("point:6").point == 6);
  CHECK(parse_named("const:1").value);
  CHECK_THROWS_AS(parse_named("tribes"), ParseError);
  CHECK_THROWS_AS(parse_named("point:"), ParseError);
}

TEST_CASE("penalty shoot-out") {
  const TruthTable p0 = pso(0);
  CHECK(p0.num_vars() == 1);
  CHECK(p0 == TruthTable::from_function(1, [](std::uint64_t x) { return x == 1; }));
  CHECK(dave_exact(pso(2)) == ExactRational(13, 2));
  CHECK(worst_depth(pso(2)) == 5);
  CHECK(pso(3).weight() == 64);
  for (int n = 0; n <= 5; ++n) {
    const TruthTable f = pso(n);
    CHECK(f == pso_oracle(n));
    CHECK(f.weight() == (std::uint64_t{1} << (2 * n)));
    // Monotone: raising any single bit never lowers the output.
    bool monotone = true;
    for (std::uint64_t x = 0; x < f.size(); ++x)
      for (int v = 0; v < f.num_vars(); ++v)
        if (!bit(x, v) && f[x] && !f[x | (std::uint64_t{1} << v)]) monotone = false;
    CHECK(monotone);
    CHECK(dave_exact(f) == ExactRational((std::int64_t{4} << n) - 3, n));
    CHECK(worst_depth(f) == 2 * n + 1);
  }
  CHECK_THROWS_AS(pso(12), LimitError);
}

TEST_CASE("composition") {
  const TruthTable oa = compose(or_table(2), and_table(2));
  CHECK(oa.num_vars() == 4);
  CHECK(oa.weight() == 7);
  const TruthTable id = make_named({NamedKind::kXor}, 1);
  std::mt19937_64 rng(3);
  const TruthTable f = random_table(6, rng);
  CHECK(compose(f, id) == f);
  CHECK(compose(xor_table(2), xor_table(2)) == xor_table(4));
  // Block k covers variables k*m .. k*m+m-1.
  const TruthTable g = compose(and_table(2), point_table(3, 0b101));
  CHECK(g.weight() == 1);
  CHECK(g[0b101101]);
  CHECK_THROWS_AS(compose(xor_table(5), xor_table(5)), LimitError);
}

TEST_CASE("DNF parse and print") {
  const DnfFormula phi = dnf_parse("n=3\nx1 x2 | !x1 x3\n");
  CHECK(phi.n == 3);
  CHECK(phi.width() == 2);
  CHECK(phi.size() == 2);
  CHECK(dnf_print(phi) == "n=3\nx1 x2 | !x1 x3\n");
  CHECK(dnf_print(dnf_parse("n=4\n  x3 !x1\n |\n x4 \n")) == "n=4\n!x1 x3 | x4\n");
  CHECK(dnf_parse("n=2\n").size() == 0);
  CHECK(dnf_parse("n=2\nx1 x1\n").terms[0].width() == 1);
  const auto t = dnf_to_table(phi);
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(t[x] == ((bit(x, 0) && bit(x, 1)) || (!bit(x, 0) && bit(x, 2))));
}

TEST_CASE("DNF parse errors carry positions") {
  const auto where = [](const char* text) {
    try {
      dnf_parse(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.line(), e.column());
    }
    return std::make_pair(-1, -1);
  };
  CHECK(where("m=3\nx1\n") == std::make_pair(1, 1));
  CHECK(where("n=three\n") == std::make_pair(1, 3));
  CHECK(where("n=3\nx1 | x4\n") == std::make_pair(2, 6));
  CHECK(where("n=3\nx1\nx2 !x2\n") == std::make_pair(3, 4));
  CHECK(where("n=3\nx1 | | x2\n") == std::make_pair(2, 6));
  CHECK(where("n=3\nx1 |\n") .first == 3);
  CHECK(where("n=3\nx1 y2\n") == std::make_pair(2, 4));
  CHECK(where("n=3\nx1x2\n") == std::make_pair(2, 3));
  CHECK(where("n=3\n!1\n") == std::make_pair(2, 2));
  CHECK(where("n=40\nx1\n").first == 1);
}

TEST_CASE("DNF evaluation and round trips") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const int w = 1 + static_cast<int>(rng.below(n));
    const DnfFormula phi = random_dnf(n, static_cast<int>(rng.below(9)), w, rng);
    const DnfFormula back = dnf_parse(dnf_print(phi));
    CHECK(back == phi);
    const TruthTable t = dnf_to_table(back);
    CHECK(t == dnf_to_table(phi));
    for (std::uint64_t x = 0; x < t.size(); x += 1 + rng.below(7)) {
      bool expect = false;
      for (const auto& term : phi.terms) {
        bool sat = true;
        for (int v = 0; v < n; ++v) {
          if ((term.positive >> v) & 1u) sat = sat && bit(x, v);
          if ((term.negative >> v) & 1u) sat = sat && !bit(x, v);
        }
        expect = expect || sat;
      }
      CHECK(dnf_eval(phi, x) == expect);
      CHECK(t[x] == expect);
    }
  }
}

TEST_CASE("canonical DNF") {
  const DnfFormula pz = canonical_dnf(point_table(6, 41));
  CHECK(pz.size() == 1);
  CHECK(pz.width() == 6);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const TruthTable f = random_table(1 + trial % 9, rng);
    if (f.weight() == 0) continue;
    CHECK(dnf_to_table(canonical_dnf(f)) == f);
  }
}

TEST_CASE("theorem13 construction") {
  const auto inst = theorem13_construct(16, 8, 32, 1);
  CHECK(inst.m == 8);
  CHECK(inst.h == 2);
  CHECK(inst.s == 32);
  CHECK(inst.formula.size() == 16);
  CHECK(inst.formula.width() == 8);
  CHECK(inst.p == doctest::Approx(1.0 / 32));
  CHECK(inst.p <= 1.0 / 16);
  CHECK(inst.g.weight() == 8);
  CHECK(inst.d == min_certificate(inst.g));

  // The kept candidate is the first with the largest certificate.
  int best = -1, arg = -1;
  for (int i = 0; i < 32; ++i) {
    Rng rng(1 ^ stream_tag::kCandidates, static_cast<std::uint64_t>(i));
    const int d = min_certificate(sample_fixed_weight(8, 8, rng));
    if (d > best) best = d, arg = i;
  }
  CHECK(inst.chosen == arg);
  CHECK(inst.d == best);

  const TruthTable f = dnf_to_table(inst.formula);
  CHECK(f == TruthTable::from_function(16, [&](std::uint64_t x) { return inst.g[x & 255] || inst.g[x >> 8]; }));

  const auto b = theorem13_bounds(inst);
  CHECK(b.upper == doctest::Approx(10.0));
  CHECK(b.upper <= 16 * (1 - (4.0 - 2) / 8));
  const double measured = measure_exact(block_or_strategy(inst.g, inst.h, 16), f).mean;
  CHECK(b.lower <= measured);
  CHECK(measured <= b.upper);

  for (int n = 2; n <= 24; ++n)
    for (int w = 1; w <= std::min(n, 12); ++w) {
      if (w < 2 * std::log2(double(n))) continue;
      const auto i = theorem13_construct(n, w, 2, 5);
      CAPTURE(n);
      CAPTURE(w);
      CHECK(i.m * static_cast<std::uint64_t>(i.h) <= i.s);
      CHECK(i.p <= 1.0 / n);
      const auto bb = theorem13_bounds(i);
      CHECK(bb.lower <= bb.upper);
    }

  Theorem13Instance degenerate = inst;
  degenerate.d = 0;
  CHECK(theorem13_bounds(degenerate).lower == 0);
  CHECK_THROWS_AS(theorem13_construct(16, 7, 4, 0), PreconditionError);
  CHECK_THROWS_AS(theorem13_construct(16, 8, 0, 0), PreconditionError);
}
