#include "avgq/certificate.hpp"

#include <algorithm>
#include <bit>
#include <vector>

#include "avgq/errors.hpp"

namespace avgq {

namespace {

void check_size(const TruthTable& f) {
  if (f.num_vars() > kMaxCertificateVars)
    throw LimitError("certificate computations support n <= " + std::to_string(kMaxCertificateVars));
}

// True when f is constant on the subcube { y : y agrees with x on mask }.
bool forces(const TruthTable& f, std::uint64_t x, std::uint64_t mask) {
  const std::uint64_t all = f.size() - 1;
  const std::uint64_t free = all & ~mask;
  const std::uint64_t base = x & mask;
  const bool want = f[x];
  std::uint64_t s = 0;
  do {
    if (f[base | s] != want) return false;
    s = (s - free) & free;
  } while (s != 0);
  return true;
}

// Next k-subset of n bits in colexicographic order (Gosper's hack).
std::uint64_t next_combination(std::uint64_t v) {
  const std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

int certificate_complexity(const TruthTable& f, std::uint64_t x) {
  check_size(f);
  const int n = f.num_vars();
  if (x >= f.size()) throw std::out_of_range("input index outside the cube");
  for (int k = 0; k <= n; ++k) {
    if (k == 0) {
      if (f.is_constant()) return 0;
      continue;
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = (std::uint64_t{1} << k) - 1; mask < limit; mask = next_combination(mask))
      if (forces(f, x, mask)) return k;
  }
  return n;
}

int min_certificate(const TruthTable& f) {
  check_size(f);
  const int n = f.num_vars();
  if (f.is_constant()) return 0;
  std::vector<std::uint64_t> pow3(static_cast<std::size_t>(n) + 1, 1);
  for (int i = 1; i <= n; ++i) pow3[static_cast<std::size_t>(i)] = 3 * pow3[static_cast<std::size_t>(i) - 1];
  const std::uint64_t states = pow3[static_cast<std::size_t>(n)];

  // flags bit 0: f|rho is identically 0; bit 1: identically 1.
  std::vector<std::uint8_t> flags(states);
  std::vector<std::uint8_t> digit(static_cast<std::size_t>(n), 0);
  std::uint64_t x = 0;
  int free_count = 0;
  int best_free = 0;
  for (std::uint64_t i = 0; i < states; ++i) {
    int p = 0;
    while (p < n && digit[static_cast<std::size_t>(p)] != 2) ++p;
    std::uint8_t fl;
    if (p == n)
      fl = f[x] ? 2 : 1;
    else
      fl = flags[i - 2 * pow3[static_cast<std::size_t>(p)]] & flags[i - pow3[static_cast<std::size_t>(p)]];
    flags[i] = fl;
    if (fl != 0) best_free = std::max(best_free, free_count);
    // Odometer step over base-3 digits (0, 1 fixed; 2 free).
    for (int b = 0; b < n; ++b) {
      auto& d = digit[static_cast<std::size_t>(b)];
      if (d == 0) {
        d = 1;
        x |= std::uint64_t{1} << b;
        break;
      }
      if (d == 1) {
        d = 2;
        x &= ~(std::uint64_t{1} << b);
        ++free_count;
        break;
      }
      d = 0;
      --free_count;
    }
  }
  return n - best_free;
}

}  // namespace avgq
