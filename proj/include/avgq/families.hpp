#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "avgq/rng.hpp"
#include "avgq/truth_table.hpp"

namespace avgq {

enum class NamedKind { kAnd, kOr, kXor, kPoint, kConstant };

struct NamedFunction {
  NamedKind kind = NamedKind::kAnd;
  std::uint64_t point = 0;  // kPoint: table index of the black point
  bool value = false;       // kConstant
};

TruthTable make_named(const NamedFunction& spec, int n);
// "and", "or", "xor", "point:<index>", "const:0", "const:1".
NamedFunction parse_named(std::string_view text);

// Penalty shoot-out on 2n+1 variables. Round i (1-based) reads x_{2i-1} (team A
// scores when 1) and x_{2i} (team B scores when 0); it is decisive exactly when
// x_{2i-1} = x_{2i}, and then the output is x_{2i-1}. With no decisive round the
// output is x_{2n+1}.
TruthTable pso(int rounds);

// (F o G)(x) = F(G(x^(1)), ..., G(x^(n))) with block k on variables
// k*m .. k*m+m-1 (0-based), m = G's variable count.
TruthTable compose(const TruthTable& outer, const TruthTable& inner);

inline constexpr int kMaxDnfVars = 32;

struct DnfTerm {
  std::uint32_t positive = 0;  // bit v: literal x_{v+1}
  std::uint32_t negative = 0;  // bit v: literal !x_{v+1}

  int width() const;
  // The assignment this term requires.
  Restriction requirement() const { return Restriction(positive | negative, positive); }
  bool operator==(const DnfTerm&) const = default;
};

struct DnfFormula {
  int n = 0;
  std::vector<DnfTerm> terms;

  int width() const;
  std::size_t size() const { return terms.size(); }
  bool operator==(const DnfFormula&) const = default;
};

// File format: first line "n=<int>", then terms separated by '|', literals
// "xK" or "!xK" (1-based K) separated by whitespace. Line breaks are
// whitespace. An empty body is the constant-0 formula.
DnfFormula dnf_parse(std::string_view text);
std::string dnf_print(const DnfFormula& phi);
bool dnf_eval(const DnfFormula& phi, std::uint64_t x);
TruthTable dnf_to_table(const DnfFormula& phi);
// One width-n term per black point, in table-index order.
DnfFormula canonical_dnf(const TruthTable& f);
// `terms` terms, each on `width` distinct random variables with random signs.
DnfFormula random_dnf(int n, int terms, int width, Rng& rng);

inline constexpr int kDefaultCandidates = 32;

// f = OR over h disjoint width-w blocks of g, g in B_{w,m}.
struct Theorem13Instance {
  int n = 0;
  int w = 0;
  std::uint64_t m = 0;  // ceil(2^w / 2n)
  int h = 0;            // floor(n / w)
  std::uint64_t s = 0;  // ceil(2^w / w)
  TruthTable g;
  int d = 0;            // min_certificate(g)
  double p = 0;         // m / 2^w
  int candidates = 0;
  int chosen = 0;       // index of the kept candidate
  DnfFormula formula;
};

// Best of `candidates` samples g in B_{w,m} by min_certificate, ties to the
// lowest index. Candidate i uses stream i of the seed.
Theorem13Instance theorem13_construct(int n, int w, int candidates, std::uint64_t seed);

struct Theorem13Bounds {
  double lower;  // h d (1-p)^h
  double upper;  // h (log2 m + 2)
};
Theorem13Bounds theorem13_bounds(const Theorem13Instance& inst);

}  // namespace avgq
