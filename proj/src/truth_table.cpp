#include "avgq/truth_table.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>

#include "avgq/errors.hpp"

namespace avgq {

namespace {

std::size_t word_count(int n) { return n >= 6 ? (std::size_t{1} << (n - 6)) : 1; }

}  // namespace

TruthTable::TruthTable(int n, bool value) : n_(n) {
  if (n < 0 || n > kMaxVars)
    throw LimitError("truth table variable count " + std::to_string(n) + " outside 0.." +
                     std::to_string(kMaxVars));
  words_.assign(word_count(n), value ? ~std::uint64_t{0} : 0);
  clear_padding();
}

void TruthTable::clear_padding() {
  if (n_ < 6) words_[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n_)) - 1;
}

TruthTable TruthTable::from_on_set(int n, std::span<const std::uint64_t> black_points) {
  TruthTable t(n);
  for (auto x : black_points) {
    if (x >= t.size()) throw std::out_of_range("black point outside the cube");
    t.set(x, true);
  }
  return t;
}

std::uint64_t TruthTable::weight() const {
  std::uint64_t w = 0;
  for (auto word : words_) w += static_cast<std::uint64_t>(std::popcount(word));
  return w;
}

bool TruthTable::is_constant() const {
  const auto w = weight();
  return w == 0 || w == size();
}

std::vector<std::uint64_t> TruthTable::on_set() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (auto word = words_[i]; word != 0; word &= word - 1)
      out.push_back((i << 6) | static_cast<std::uint64_t>(std::countr_zero(word)));
  }
  return out;
}

TruthTable TruthTable::operator~() const {
  TruthTable t(*this);
  for (auto& w : t.words_) w = ~w;
  t.clear_padding();
  return t;
}

std::uint64_t weight(const TruthTable& f) { return f.weight(); }

int Restriction::support_size() const { return std::popcount(fixed); }

Restriction Restriction::with(int var, bool v) const {
  const std::uint32_t bit = 1u << var;
  return Restriction(fixed | bit, v ? (values | bit) : (values & ~bit));
}

Restriction Restriction::merged(const Restriction& other) const {
  const std::uint32_t common = fixed & other.fixed;
  if ((values & common) != (other.values & common))
    throw std::invalid_argument("restrictions disagree on a shared variable");
  return Restriction(fixed | other.fixed, values | other.values);
}

TruthTable restrict(const TruthTable& f, int var, bool value) {
  const int n = f.num_vars();
  if (var < 0 || var >= n) throw std::out_of_range("restriction variable out of range");
  TruthTable out(n - 1);
  if (var >= 6 && n >= 7) {
    // Whole-word blocks: copy the half selected by `value`.
    const std::size_t block = std::size_t{1} << (var - 6);
    const auto in = f.words();
    auto dst = out.mutable_words().begin();
    for (std::size_t base = 0; base < in.size(); base += 2 * block) {
      const auto from = in.begin() + static_cast<std::ptrdiff_t>(base + (value ? block : 0));
      dst = std::copy(from, from + static_cast<std::ptrdiff_t>(block), dst);
    }
    return out;
  }
  const std::uint64_t low = (std::uint64_t{1} << var) - 1;
  const std::uint64_t vbit = value ? (std::uint64_t{1} << var) : 0;
  for (std::uint64_t y = 0; y < out.size(); ++y) {
    const std::uint64_t x = (y & low) | ((y & ~low) << 1) | vbit;
    if (f[x]) out.set(y, true);
  }
  return out;
}

TruthTable restrict(const TruthTable& f, const Restriction& rho) {
  const int n = f.num_vars();
  if (n < 32 && (rho.fixed >> n) != 0)
    throw std::out_of_range("restriction fixes a variable outside 1..n");
  const std::uint64_t free_mask = ((std::uint64_t{1} << n) - 1) & ~std::uint64_t{rho.fixed};
  TruthTable out(std::popcount(free_mask));
  std::uint64_t s = 0;
  for (std::uint64_t y = 0; y < out.size(); ++y) {
    if (f[rho.values | s]) out.set(y, true);
    s = (s - free_mask) & free_mask;
  }
  return out;
}

PathSpec::PathSpec(std::vector<std::pair<int, bool>> steps) : steps_(std::move(steps)) {
  std::uint64_t seen = 0;
  for (const auto& [var, v] : steps_) {
    if (var < 0 || var >= kMaxPathVars) throw std::out_of_range("path variable out of range");
    if ((seen >> var) & 1u) throw std::invalid_argument("path repeats a variable");
    seen |= std::uint64_t{1} << var;
  }
}

Restriction PathSpec::prefix(std::size_t j) const {
  Restriction r;
  for (std::size_t i = 0; i < j && i < steps_.size(); ++i) {
    if (steps_[i].first >= kMaxVars) throw std::out_of_range("path variable beyond table range");
    r = r.with(steps_[i].first, steps_[i].second);
  }
  return r;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

TruthTable parse_truth_table(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty input; expected variable count", 1);
  int n = -1;
  {
    const auto& l = lines[0];
    auto [ptr, ec] = std::from_chars(l.data(), l.data() + l.size(), n);
    if (ec != std::errc{} || ptr != l.data() + l.size())
      throw ParseError("expected a decimal variable count, got '" + std::string(l) + "'", 1);
    if (n < 0 || n > kMaxVars)
      throw ParseError("variable count " + std::to_string(n) + " outside 0.." + std::to_string(kMaxVars), 1);
  }
  if (lines.size() < 2) throw ParseError("missing table line", 2);
  if (lines.size() > 2) throw ParseError("unexpected trailing content", 3);
  TruthTable f(n);
  std::string_view body = lines[1];
  if (body.starts_with("hex:")) {
    body.remove_prefix(4);
    const std::uint64_t digits = (f.size() + 3) / 4;
    if (body.size() != digits)
      throw ParseError("expected " + std::to_string(digits) + " hex digits, got " + std::to_string(body.size()), 2);
    for (std::uint64_t d = 0; d < digits; ++d) {
      const int v = hex_value(body[d]);
      if (v < 0) throw ParseError("invalid hex digit '" + std::string(1, body[d]) + "'", 2, static_cast<int>(d + 5));
      for (int b = 0; b < 4; ++b) {
        const std::uint64_t x = 4 * d + static_cast<std::uint64_t>(b);
        const bool bit = (v >> (3 - b)) & 1;
        if (x < f.size())
          f.set(x, bit);
        else if (bit)
          throw ParseError("nonzero hex padding bits", 2, static_cast<int>(d + 5));
      }
    }
    return f;
  }
  if (body.size() != f.size())
    throw ParseError("expected " + std::to_string(f.size()) + " table bits, got " + std::to_string(body.size()), 2);
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    const char c = body[x];
    if (c != '0' && c != '1')
      throw ParseError("invalid table character '" + std::string(1, c) + "'", 2, static_cast<int>(x + 1));
    f.set(x, c == '1');
  }
  return f;
}

std::string format_truth_table(const TruthTable& f) { return format_truth_table(f, f.num_vars() > 16); }

std::string format_truth_table(const TruthTable& f, bool hex) {
  std::string out = std::to_string(f.num_vars()) + "\n";
  if (hex) {
    static constexpr char kDigits[] = "0123456789ABCDEF";
    out += "hex:";
    const std::uint64_t digits = (f.size() + 3) / 4;
    for (std::uint64_t d = 0; d < digits; ++d) {
      int v = 0;
      for (int b = 0; b < 4; ++b) {
        const std::uint64_t x = 4 * d + static_cast<std::uint64_t>(b);
        if (x < f.size() && f[x]) v |= 1 << (3 - b);
      }
      out += kDigits[v];
    }
  } else {
    out.reserve(out.size() + f.size() + 1);
    for (std::uint64_t x = 0; x < f.size(); ++x) out += f[x] ? '1' : '0';
  }
  out += '\n';
  return out;
}

}  // namespace avgq
