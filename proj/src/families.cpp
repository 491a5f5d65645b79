#include "avgq/families.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>

#include "avgq/certificate.hpp"
#include "avgq/errors.hpp"
#include "avgq/parallel.hpp"
#include "avgq/randgen.hpp"

namespace avgq {

TruthTable make_named(const NamedFunction& spec, int n) {
  if (n < 1) throw PreconditionError("named functions need n >= 1");
  if (n > kMaxVars) throw LimitError("n exceeds the truth-table limit");
  switch (spec.kind) {
    case NamedKind::kAnd: {
      TruthTable t(n);
      t.set(t.size() - 1, true);
      return t;
    }
    case NamedKind::kOr:
      return ~TruthTable::from_function(n, [](std::uint64_t x) { return x == 0; });
    case NamedKind::kXor:
      return TruthTable::from_function(n, [](std::uint64_t x) { return std::popcount(x) & 1; });
    case NamedKind::kPoint: {
      TruthTable t(n);
      if (spec.point >= t.size()) throw PreconditionError("point index outside {0,1}^n");
      t.set(spec.point, true);
      return t;
    }
    case NamedKind::kConstant:
      return TruthTable(n, spec.value);
  }
  throw std::logic_error("unknown named function");
}

NamedFunction parse_named(std::string_view text) {
  if (text == "and") return {NamedKind::kAnd};
  if (text == "or") return {NamedKind::kOr};
  if (text == "xor") return {NamedKind::kXor};
  if (text == "const:0" || text == "const:1") return {NamedKind::kConstant, 0, text.back() == '1'};
  if (text.starts_with("point:")) {
    NamedFunction f{NamedKind::kPoint};
    const auto digits = text.substr(6);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), f.point);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) return f;
  }
  throw ParseError("unknown function '" + std::string(text) + "' (expected and, or, xor, point:<index>, const:0|1)");
}

TruthTable pso(int rounds) {
  if (rounds < 0) throw PreconditionError("pso needs n >= 0");
  if (2 * rounds + 1 > kMaxVars) throw LimitError("pso(n) needs 2n+1 <= 24 variables");
  return TruthTable::from_function(2 * rounds + 1, [rounds](std::uint64_t x) {
    for (int i = 0; i < rounds; ++i) {
      const bool a = (x >> (2 * i)) & 1u, b = (x >> (2 * i + 1)) & 1u;
      if (a == b) return a;
    }
    return static_cast<bool>((x >> (2 * rounds)) & 1u);
  });
}

TruthTable compose(const TruthTable& outer, const TruthTable& inner) {
  const int n = outer.num_vars(), m = inner.num_vars();
  if (n * m > kMaxVars) throw LimitError("composition exceeds the truth-table limit");
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  return TruthTable::from_function(n * m, [&](std::uint64_t x) {
    std::uint64_t y = 0;
    for (int k = 0; k < n; ++k)
      if (inner[(x >> (k * m)) & mask]) y |= std::uint64_t{1} << k;
    return outer[y];
  });
}

int DnfTerm::width() const { return std::popcount(positive | negative); }

int DnfFormula::width() const {
  int w = 0;
  for (const auto& t : terms) w = std::max(w, t.width());
  return w;
}

namespace {

class DnfScanner {
 public:
  explicit DnfScanner(std::string_view text) : text_(text) {}

  DnfFormula parse() {
    DnfFormula phi;
    phi.n = header();
    DnfTerm term;
    bool term_open = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '|') {
        if (!term_open) throw ParseError("empty term", line_, col_);
        phi.terms.push_back(term);
        term = {};
        term_open = false;
        advance();
      } else if (c == 'x' || c == '!') {
        literal(phi.n, term);
        term_open = true;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
    }
    if (term_open)
      phi.terms.push_back(term);
    else if (!phi.terms.empty())
      throw ParseError("empty term after '|'", line_, col_);
    return phi;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  int header() {
    const std::size_t end = std::min(text_.find('\n'), text_.size());
    std::string_view head = text_.substr(0, end);
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.remove_suffix(1);
    std::size_t lead = 0;
    while (lead < head.size() && std::isspace(static_cast<unsigned char>(head[lead]))) ++lead;
    if (head.substr(lead, 2) != "n=") throw ParseError("expected \"n=<int>\"", 1, static_cast<int>(lead) + 1);
    const auto digits = head.substr(lead + 2);
    int n = -1;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
      throw ParseError("bad variable count", 1, static_cast<int>(lead) + 3);
    if (n < 0 || n > kMaxDnfVars) throw ParseError("variable count must lie in [0, 32]", 1, static_cast<int>(lead) + 3);
    pos_ = end;
    line_ = 1;
    col_ = static_cast<int>(end) + 1;
    return n;
  }

  void literal(int n, DnfTerm& term) {
    const int at_line = line_, at_col = col_;
    const bool neg = text_[pos_] == '!';
    if (neg) advance();
    if (pos_ >= text_.size() || text_[pos_] != 'x') throw ParseError("expected 'x' after '!'", line_, col_);
    advance();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    if (start == pos_) throw ParseError("expected a variable index", line_, col_);
    int index = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, index);
    if (ec != std::errc() || index < 1 || index > n)
      throw ParseError("variable index out of range 1.." + std::to_string(n), at_line, at_col);
    if (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '|')
      throw ParseError("literals must be separated by whitespace", line_, col_);
    const std::uint32_t bit = 1u << (index - 1);
    if ((neg ? term.positive : term.negative) & bit)
      throw ParseError("contradictory literals x" + std::to_string(index) + " and !x" + std::to_string(index) +
                           " in one term",
                       at_line, at_col);
    (neg ? term.negative : term.positive) |= bit;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

DnfFormula dnf_parse(std::string_view text) { return DnfScanner(text).parse(); }

std::string dnf_print(const DnfFormula& phi) {
  std::string out = "n=" + std::to_string(phi.n) + "\n";
  for (std::size_t i = 0; i < phi.terms.size(); ++i) {
    if (i) out += " | ";
    const auto& t = phi.terms[i];
    bool first = true;
    for (std::uint32_t m = t.positive | t.negative; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      if (!first) out += ' ';
      first = false;
      if ((t.negative >> v) & 1u) out += '!';
      out += "x" + std::to_string(v + 1);
    }
  }
  return out + "\n";
}

bool dnf_eval(const DnfFormula& phi, std::uint64_t x) {
  const auto lo = static_cast<std::uint32_t>(x);
  for (const auto& t : phi.terms)
    if ((lo & t.positive) == t.positive && (lo & t.negative) == 0) return true;
  return false;
}

TruthTable dnf_to_table(const DnfFormula& phi) {
  if (phi.n > kMaxVars) throw LimitError("DNF has more variables than a truth table allows");
  TruthTable f(phi.n);
  // Each term covers a subcube: enumerate its free variables.
  const std::uint32_t all = static_cast<std::uint32_t>((std::uint64_t{1} << phi.n) - 1);
  for (const auto& t : phi.terms) {
    const std::uint32_t free = all & ~(t.positive | t.negative);
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
      f.set(t.positive | sub, true);
      if (sub == 0) break;
    }
  }
  return f;
}

DnfFormula canonical_dnf(const TruthTable& f) {
  DnfFormula phi{f.num_vars(), {}};
  const std::uint32_t all = static_cast<std::uint32_t>((std::uint64_t{1} << f.num_vars()) - 1);
  for (std::uint64_t x : f.on_set())
    phi.terms.push_back({static_cast<std::uint32_t>(x), all & ~static_cast<std::uint32_t>(x)});
  return phi;
}

DnfFormula random_dnf(int n, int terms, int width, Rng& rng) {
  if (n < 0 || n > kMaxDnfVars || width < 1 || width > n || terms < 0)
    throw PreconditionError("random DNF needs 1 <= width <= n <= 32");
  DnfFormula phi{n, {}};
  std::vector<int> vars(static_cast<std::size_t>(n));
  for (int t = 0; t < terms; ++t) {
    for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = i;
    DnfTerm term;
    for (int i = 0; i < width; ++i) {
      std::swap(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(i) + rng.below(n - i)]);
      const std::uint32_t bit = 1u << vars[static_cast<std::size_t>(i)];
      (rng.below(2) ? term.negative : term.positive) |= bit;
    }
    phi.terms.push_back(term);
  }
  return phi;
}

Theorem13Instance theorem13_construct(int n, int w, int candidates, std::uint64_t seed) {
  if (n < 2 || w > n || static_cast<double>(w) < 2 * std::log2(static_cast<double>(n)))
    throw PreconditionError("theorem13 needs 2 log2 n <= w <= n");
  if (w > kMaxCertificateVars) throw LimitError("theorem13 needs w <= " + std::to_string(kMaxCertificateVars));
  if (n > kMaxDnfVars) throw LimitError("theorem13 needs n <= 32");
  if (candidates < 1) throw PreconditionError("theorem13 needs at least one candidate");

  Theorem13Instance inst;
  inst.n = n;
  inst.w = w;
  const std::uint64_t cube = std::uint64_t{1} << w;
  inst.m = (cube + 2 * static_cast<std::uint64_t>(n) - 1) / (2 * static_cast<std::uint64_t>(n));
  inst.h = n / w;
  inst.s = (cube + static_cast<std::uint64_t>(w) - 1) / static_cast<std::uint64_t>(w);
  inst.p = static_cast<double>(inst.m) / static_cast<double>(cube);
  inst.candidates = candidates;

  std::vector<TruthTable> pool(static_cast<std::size_t>(candidates));
  std::vector<int> score(static_cast<std::size_t>(candidates));
  parallel_for(0, static_cast<std::uint64_t>(candidates), 0, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(seed ^ stream_tag::kCandidates, i);
      pool[i] = sample_fixed_weight(w, inst.m, rng);
      score[i] = min_certificate(pool[i]);
    }
  });
  inst.chosen = static_cast<int>(std::max_element(score.begin(), score.end()) - score.begin());
  inst.g = pool[static_cast<std::size_t>(inst.chosen)];
  inst.d = score[static_cast<std::size_t>(inst.chosen)];

  inst.formula.n = n;
  const std::uint32_t block = static_cast<std::uint32_t>(cube - 1);
  for (int k = 0; k < inst.h; ++k)
    for (std::uint64_t b : inst.g.on_set()) {
      const auto pos = static_cast<std::uint32_t>(b);
      inst.formula.terms.push_back({pos << (k * w), (block & ~pos) << (k * w)});
    }
  return inst;
}

Theorem13Bounds theorem13_bounds(const Theorem13Instance& inst) {
  const double h = inst.h;
  return {h * inst.d * std::pow(1 - inst.p, h), h * (std::log2(static_cast<double>(inst.m)) + 2)};
}

}  // namespace avgq
