#include "walshlab/dyadic_point.hpp"

#include <algorithm>
#include <cmath>

#include "walshlab/error.hpp"

namespace walshlab {

void DyadicPoint::trim() {
  while (!bits_.empty() && bits_.back() == 0) bits_.pop_back();
}

DyadicPoint DyadicPoint::from_cell(uint64_t j, int resolution) {
  require(resolution >= 0 && resolution < 64, Errc::invalid_argument, "bad resolution");
  require(j < (uint64_t{1} << resolution), Errc::invalid_argument, "cell index out of range");
  DyadicPoint p;
  p.bits_.resize(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i)
    p.bits_[static_cast<std::size_t>(i)] =
        static_cast<uint8_t>((j >> (resolution - 1 - i)) & 1u);
  p.trim();
  return p;
}

DyadicPoint DyadicPoint::from_ratio(uint64_t num, int log2_den) {
  return from_cell(num, log2_den);
}

DyadicPoint DyadicPoint::random(int resolution, std::mt19937_64& rng) {
  require(resolution >= 0, Errc::invalid_argument, "bad resolution");
  DyadicPoint p;
  p.bits_.resize(static_cast<std::size_t>(resolution));
  uint64_t word = 0;
  int avail = 0;
  for (int i = 0; i < resolution; ++i) {
    if (avail == 0) {
      word = rng();
      avail = 64;
    }
    p.bits_[static_cast<std::size_t>(i)] = static_cast<uint8_t>(word & 1u);
    word >>= 1;
    --avail;
  }
  p.trim();
  return p;
}

DyadicPoint DyadicPoint::from_bits(std::vector<uint8_t> bits) {
  for (uint8_t b : bits) require(b <= 1, Errc::invalid_argument, "bits must be 0 or 1");
  DyadicPoint p;
  p.bits_ = std::move(bits);
  p.trim();
  return p;
}

int DyadicPoint::bit(int64_t i) const {
  require(i >= 1, Errc::invalid_argument, "fractional bits are 1-based");
  if (i > static_cast<int64_t>(bits_.size())) return 0;
  return bits_[static_cast<std::size_t>(i - 1)];
}

DyadicPoint DyadicPoint::xor_with(const DyadicPoint& other) const {
  DyadicPoint out;
  out.bits_.resize(std::max(bits_.size(), other.bits_.size()));
  for (std::size_t i = 0; i < out.bits_.size(); ++i) {
    uint8_t a = i < bits_.size() ? bits_[i] : 0;
    uint8_t b = i < other.bits_.size() ? other.bits_[i] : 0;
    out.bits_[i] = a ^ b;
  }
  out.trim();
  return out;
}

uint64_t DyadicPoint::cell_index(int n) const {
  require(n >= 0 && n < 64, Errc::invalid_argument, "bad resolution");
  uint64_t j = 0;
  for (int i = 1; i <= n; ++i) j = (j << 1) | static_cast<uint64_t>(bit(i));
  return j;
}

bool DyadicPoint::operator==(const DyadicPoint& other) const {
  return bits_ == other.bits_; // both trimmed
}

double DyadicPoint::approx() const {
  double v = 0.0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) v += std::ldexp(1.0, -static_cast<int>(i + 1));
  return v;
}

std::string DyadicPoint::bit_string() const {
  if (bits_.empty()) return "0";
  std::string s;
  s.reserve(bits_.size());
  for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

} // namespace walshlab
