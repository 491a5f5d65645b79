#pragma once

#include <cstdint>

#include "avgq/truth_table.hpp"

namespace avgq {

// Largest n accepted by the certificate routines.
inline constexpr int kMaxCertificateVars = 16;

// C_x(f): size of the smallest S such that fixing x on S forces f(x).
int certificate_complexity(const TruthTable& f, std::uint64_t x);

// min_x C_x(f), i.e. the fewest fixed variables of any restriction that makes
// f constant. Sweeps the 3^n restriction lattice once.
int min_certificate(const TruthTable& f);

}  // namespace avgq
