#pragma once

#include <cstdint>

#include "avgq/rng.hpp"

namespace avgq {

// Number of marked items among `draws` items taken without replacement from a
// box of `total` items of which `marked` are marked. Totals up to 2^62.
//
// Small samples (at most 32 items after the complement symmetry) are drawn one
// by one with integer arithmetic. Larger ones use ratio-of-uniforms rejection
// (Stadlober's H2PE/HRUA family) with log-gamma differences evaluated in a
// cancellation-free Stirling form, so the acceptance test stays accurate when
// the box has ~2^60 items.
std::uint64_t sample_hypergeometric(Rng& rng, std::uint64_t total, std::uint64_t marked, std::uint64_t draws);

// lgamma(a) - lgamma(b) for positive integers, accurate in absolute terms when
// a and b are huge but close.
double lgamma_difference(std::uint64_t a, std::uint64_t b);

}  // namespace avgq
