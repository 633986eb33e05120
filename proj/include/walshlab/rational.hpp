#ifndef WALSHLAB_RATIONAL_HPP
#define WALSHLAB_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "walshlab/error.hpp"

namespace walshlab {

/// Exact rational on int64 components, always normalized (gcd 1, den > 0).
/// Intermediates use 128-bit arithmetic; results that do not fit back into
/// int64 raise out_of_range rather than silently losing exactness.
class Rat64 {
public:
  constexpr Rat64() : num_(0), den_(1) {}
  Rat64(int64_t n) : num_(n), den_(1) {} // NOLINT: implicit by design
  Rat64(int64_t n, int64_t d) { assign(n, d); }

  static Rat64 from_int128(__int128 n, __int128 d);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Rat64 operator-() const { return Rat64(-num_, den_); }
  Rat64 abs() const { return num_ < 0 ? -*this : *this; }

  friend Rat64 operator+(const Rat64& a, const Rat64& b) {
    return from_int128(static_cast<__int128>(a.num_) * b.den_ +
                           static_cast<__int128>(b.num_) * a.den_,
                       static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rat64 operator-(const Rat64& a, const Rat64& b) { return a + (-b); }
  friend Rat64 operator*(const Rat64& a, const Rat64& b) {
    return from_int128(static_cast<__int128>(a.num_) * b.num_,
                       static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rat64 operator/(const Rat64& a, const Rat64& b) {
    require(!b.is_zero(), Errc::invalid_argument, "division by zero");
    return from_int128(static_cast<__int128>(a.num_) * b.den_,
                       static_cast<__int128>(a.den_) * b.num_);
  }

  friend std::strong_ordering operator<=>(const Rat64& a, const Rat64& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs < rhs ? std::strong_ordering::less
                     : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator==(const Rat64& a, const Rat64& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  double approx() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

private:
  void assign(int64_t n, int64_t d) {
    require(d != 0, Errc::invalid_argument, "zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = n;
    den_ = d;
  }

  int64_t num_;
  int64_t den_;
};

inline Rat64 Rat64::from_int128(__int128 n, __int128 d) {
  require(d != 0, Errc::invalid_argument, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 an = n < 0 ? -n : n;
  // gcd on 128-bit magnitudes
  __int128 a = an, b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  constexpr __int128 lo = -static_cast<__int128>(INT64_MAX) - 1;
  constexpr __int128 hi = static_cast<__int128>(INT64_MAX);
  require(n >= lo && n <= hi && d <= hi, Errc::out_of_range, "rational overflow");
  Rat64 r;
  r.num_ = static_cast<int64_t>(n);
  r.den_ = static_cast<int64_t>(d);
  return r;
}

/// Exact 2^-k as a rational; k <= 62.
inline Rat64 pow2_inv(int k) {
  require(k >= 0 && k <= 62, Errc::out_of_range, "pow2_inv exponent");
  return Rat64(1, int64_t{1} << k);
}

} // namespace walshlab

#endif
