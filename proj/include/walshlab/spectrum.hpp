#ifndef WALSHLAB_SPECTRUM_HPP
#define WALSHLAB_SPECTRUM_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace walshlab {

/// A natural number represented by its set of binary exponents (the positions
/// of its 1-bits), kept strictly increasing. The empty set is 0. Magnitude is
/// limited only by the number and size of exponents, so values like
/// sums of 2^e with e in the billions are cheap as long as few bits are set.
///
/// Arithmetic is restricted to what index bookkeeping needs: XOR (dyadic
/// addition), subtraction of a nested subset, full add/sub with carries,
/// doubling, and comparisons. There is deliberately no general
/// multiplication or division.
class Spectrum {
public:
  Spectrum() = default;

  static Spectrum from_value(uint64_t n);
  /// Exponents need not be sorted but must be distinct and >= 0.
  static Spectrum from_bits(std::vector<int64_t> bits);
  static Spectrum pow2(int64_t e);
  static Spectrum zero() { return Spectrum(); }

  bool is_zero() const { return bits_.empty(); }
  const std::vector<int64_t>& bits() const { return bits_; }
  std::size_t popcount() const { return bits_.size(); }
  int64_t max_bit() const; // errors on 0
  int64_t min_bit() const; // errors on 0
  bool test_bit(int64_t e) const;

  /// eps_0(n) + sum_j |eps_j(n) - eps_{j-1}(n)|: twice the number of maximal
  /// runs of consecutive exponents.
  uint64_t variation() const;

  /// Symmetric difference of the exponent sets.
  Spectrum xor_with(const Spectrum& other) const;
  /// this - other, requiring Sp(other) subset of Sp(this); equals xor_with.
  Spectrum nested_diff(const Spectrum& other) const;
  /// Full addition with carry propagation.
  Spectrum plus(const Spectrum& other) const;
  /// Full subtraction with borrows; requires other <= this.
  Spectrum minus(const Spectrum& other) const;
  Spectrum plus_pow2(int64_t e) const { return plus(pow2(e)); }
  /// Multiply by 2^k.
  Spectrum shl(int64_t k) const;

  std::strong_ordering operator<=>(const Spectrum& other) const;
  bool operator==(const Spectrum& other) const { return bits_ == other.bits_; }

  /// Exact value when it fits in uint64_t.
  std::optional<uint64_t> value() const;
  uint64_t value_or_throw() const;
  double approx() const;

  /// Decimal when the value fits 64 bits, otherwise "2^a + 2^b + ...".
  std::string str() const;

  /// True when Sp(other) is a subset of Sp(this).
  bool contains(const Spectrum& other) const;

private:
  std::vector<int64_t> bits_; // strictly increasing, all >= 0
};

inline Spectrum operator^(const Spectrum& a, const Spectrum& b) { return a.xor_with(b); }
inline Spectrum operator+(const Spectrum& a, const Spectrum& b) { return a.plus(b); }
inline Spectrum operator-(const Spectrum& a, const Spectrum& b) { return a.minus(b); }

} // namespace walshlab

#endif
