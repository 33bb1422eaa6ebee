#pragma once

#include <cstdint>

namespace combspec {

/// sum_{l=1}^{n} l^{-alpha} for alpha > 0. Exact summation up to a few
/// thousand terms, Euler-Maclaurin beyond; relative accuracy ~1e-15.
double power_partial_sum(double alpha, std::uint64_t n);

/// Riemann zeta for alpha > 1, absolute accuracy better than 1e-12.
double riemann_zeta(double alpha);

}  // namespace combspec
