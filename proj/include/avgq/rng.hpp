#pragma once

#include <cstdint>
#include <random>

namespace avgq {

// Seeded 64-bit generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; stream k of seed s is the engine seeded
// with s ^ k. Bounded integers and doubles are derived here rather than through
// <random> distributions, whose algorithms vary between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(seed ^ stream) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in the open interval (0, 1) with 53 random bits.
  double open_unit() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  bool bernoulli(double p) { return open_unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// Domain tags folded into a seed so that different uses of one seed draw from
// unrelated streams.
namespace stream_tag {
inline constexpr std::uint64_t kInputs = 0x9e3779b97f4a7c15ull;
inline constexpr std::uint64_t kFunctions = 0xbf58476d1ce4e5b9ull;
inline constexpr std::uint64_t kRestrictions = 0x94d049bb133111ebull;
inline constexpr std::uint64_t kCandidates = 0xd6e8feb86659fd93ull;
inline constexpr std::uint64_t kPaths = 0xa0761d6478bd642full;
}  // namespace stream_tag

}  // namespace avgq
