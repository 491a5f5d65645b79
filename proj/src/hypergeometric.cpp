#include "avgq/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace avgq {

namespace {

constexpr std::uint64_t kUrnLimit = 32;

double stirling_tail(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 / 1680)));
}

std::uint64_t urn(Rng& rng, std::uint64_t total, std::uint64_t marked, std::uint64_t draws) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    if (rng.below(total) < marked) {
      ++hits;
      --marked;
    }
    --total;
  }
  return hits;
}

// Count of the scarcer kind (`small` of them, `large` of the other) in `m`
// draws, m <= (small + large) / 2.
std::uint64_t ratio_of_uniforms(Rng& rng, std::uint64_t small, std::uint64_t large, std::uint64_t m) {
  constexpr double kD1 = 1.7155277699214135;  // 2 sqrt(2/e)
  constexpr double kD2 = 0.8989161620588988;  // 3 - 2 sqrt(3/e)
  const std::uint64_t popsize = small + large;
  const double p = static_cast<double>(small) / static_cast<double>(popsize);
  const double q = 1.0 - p;
  const double center = static_cast<double>(m) * p + 0.5;
  const double spread = std::sqrt(static_cast<double>(popsize - m) * static_cast<double>(m) * p * q /
                                      static_cast<double>(popsize - 1) +
                                  0.5);
  const double hat = kD1 * spread + kD2;
  const auto mode = static_cast<std::uint64_t>(static_cast<unsigned __int128>(m + 1) * (small + 1) / (popsize + 2));
  const double upper =
      std::min(static_cast<double>(std::min(m, small)) + 1.0, std::floor(center + 16.0 * spread));

  for (;;) {
    const double x = rng.open_unit();
    const double y = rng.open_unit();
    const double w = center + hat * (y - 0.5) / x;
    if (w < 0.0 || w >= upper) continue;
    const auto z = static_cast<std::uint64_t>(w);
    // log pmf(z) - log pmf(mode)
    const double t = lgamma_difference(mode + 1, z + 1) + lgamma_difference(small - mode + 1, small - z + 1) +
                     lgamma_difference(m - mode + 1, m - z + 1) +
                     lgamma_difference(large - m + mode + 1, large - m + z + 1);
    if (x * (4.0 - x) - 3.0 <= t) return z;
    if (x * (x - t) >= 1.0) continue;
    if (2.0 * std::log(x) <= t) return z;
  }
}

}  // namespace

double lgamma_difference(std::uint64_t a, std::uint64_t b) {
  if (a == b) return 0.0;
  if (std::min(a, b) < 10) return std::lgamma(static_cast<double>(a)) - std::lgamma(static_cast<double>(b));
  // (x - 1/2) ln x - x + tail(x), differenced without forming either term.
  const double d = a > b ? static_cast<double>(a - b) : -static_cast<double>(b - a);
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  return (bd - 0.5) * std::log1p(d / bd) + d * std::log(ad) - d + stirling_tail(ad) - stirling_tail(bd);
}

std::uint64_t sample_hypergeometric(Rng& rng, std::uint64_t total, std::uint64_t marked, std::uint64_t draws) {
  if (marked > total || draws > total) throw std::invalid_argument("hypergeometric parameters exceed the box");
  if (total > (std::uint64_t{1} << 62)) throw std::invalid_argument("hypergeometric box larger than 2^62");
  if (draws == 0 || marked == 0) return 0;
  if (marked == total) return draws;
  if (draws == total) return marked;

  // Draw the smaller of the sample and its complement.
  const std::uint64_t m = std::min(draws, total - draws);
  const bool complement = m < draws;
  std::uint64_t hits;
  if (m <= kUrnLimit) {
    hits = urn(rng, total, marked, m);
  } else {
    const std::uint64_t unmarked = total - marked;
    const bool marked_is_small = marked <= unmarked;
    const std::uint64_t z =
        ratio_of_uniforms(rng, marked_is_small ? marked : unmarked, marked_is_small ? unmarked : marked, m);
    hits = marked_is_small ? z : m - z;
  }
  return complement ? marked - hits : hits;
}

}  // namespace avgq
