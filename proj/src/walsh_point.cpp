#include "walshlab/walsh_point.hpp"

#include "walshlab/error.hpp"

namespace walshlab {

int rademacher(int64_t n, const DyadicPoint& x) {
  require(n >= 0, Errc::invalid_argument, "rademacher index must be >= 0");
  return x.bit(n + 1) ? -1 : 1;
}

int walsh_eval(const Spectrum& n, const DyadicPoint& x) {
  int parity = 0;
  for (int64_t e : n.bits()) parity ^= x.bit(e + 1);
  return parity ? -1 : 1;
}

int64_t dirichlet_point(const Spectrum& n, const DyadicPoint& x) {
  // Leading zero bits of x decide which blocks D_{2^e} are live: D_{2^e}(x)
  // is 2^e exactly when the first e fractional bits vanish.
  int64_t zero_prefix = 0;
  while (zero_prefix < x.resolution() && x.bit(zero_prefix + 1) == 0) ++zero_prefix;
  if (zero_prefix == x.resolution()) zero_prefix = INT64_MAX; // x == 0

  __int128 acc = 0;
  int sign = 1;
  for (auto it = n.bits().rbegin(); it != n.bits().rend(); ++it) {
    int64_t e = *it;
    if (e <= zero_prefix) {
      require(e <= 62, Errc::out_of_range, "kernel value exceeds int64");
      acc += sign * (static_cast<__int128>(1) << e);
    }
    sign *= rademacher(e, x);
  }
  require(acc >= INT64_MIN && acc <= INT64_MAX, Errc::out_of_range,
          "kernel value exceeds int64");
  return static_cast<int64_t>(acc);
}

} // namespace walshlab
