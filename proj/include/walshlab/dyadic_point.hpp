#ifndef WALSHLAB_DYADIC_POINT_HPP
#define WALSHLAB_DYADIC_POINT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace walshlab {

/// A point x in [0,1) with a finite binary expansion. Bit 1 is the most
/// significant fractional bit: x = sum_i bit(i) * 2^-i. Bits beyond the
/// stored resolution are zero, so two points that differ only by trailing
/// zeros are equal.
class DyadicPoint {
public:
  DyadicPoint() = default;

  /// Anchor of the dyadic cell [j/2^N, (j+1)/2^N), j in [0, 2^N).
  static DyadicPoint from_cell(uint64_t j, int resolution);
  /// num / 2^log2_den with num < 2^log2_den.
  static DyadicPoint from_ratio(uint64_t num, int log2_den);
  static DyadicPoint zero() { return DyadicPoint(); }
  /// Uniform on the resolution-R grid; consumes ceil(R/64) draws from rng.
  static DyadicPoint random(int resolution, std::mt19937_64& rng);
  /// From an explicit fractional bit vector (bit 1 first); any length.
  static DyadicPoint from_bits(std::vector<uint8_t> bits);

  int resolution() const { return static_cast<int>(bits_.size()); }
  /// 1-based fractional bit; 0 past the stored resolution.
  int bit(int64_t i) const;

  DyadicPoint xor_with(const DyadicPoint& other) const;

  /// Index of the resolution-N cell containing x (the leading N bits).
  uint64_t cell_index(int n) const;

  bool operator==(const DyadicPoint& other) const;

  double approx() const;
  /// Fractional bits as a 0/1 string, e.g. "101" for 5/8; "0" for x = 0.
  std::string bit_string() const;

private:
  std::vector<uint8_t> bits_; // bits_[i] is fractional bit i+1
  void trim();
};

inline DyadicPoint operator^(const DyadicPoint& a, const DyadicPoint& b) {
  return a.xor_with(b);
}

} // namespace walshlab

#endif
