#ifndef WALSHLAB_WALSH_POINT_HPP
#define WALSHLAB_WALSH_POINT_HPP

#include <cstdint>

#include "walshlab/dyadic_point.hpp"
#include "walshlab/spectrum.hpp"

namespace walshlab {

/// r_n(x) = r(2^n x): +1 when fractional bit n+1 of x is 0, else -1.
int rademacher(int64_t n, const DyadicPoint& x);

/// w_n(x) as the product of Rademacher factors selected by Sp(n).
/// Cost O(|Sp(n)|), independent of the magnitude of n.
int walsh_eval(const Spectrum& n, const DyadicPoint& x);

/// D_n(x) = sum_{k<n} w_k(x), evaluated through the block decomposition
/// D_n = sum over set bits e of (earlier Rademacher phases) * D_{2^e}.
/// Exact; errors when the value cannot fit an int64.
int64_t dirichlet_point(const Spectrum& n, const DyadicPoint& x);

} // namespace walshlab

#endif
