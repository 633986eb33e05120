#include "walshlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "walshlab/error.hpp"

namespace walshlab {

Spectrum Spectrum::from_value(uint64_t n) {
  Spectrum s;
  for (int64_t e = 0; n != 0; ++e, n >>= 1)
    if (n & 1u) s.bits_.push_back(e);
  return s;
}

Spectrum Spectrum::from_bits(std::vector<int64_t> bits) {
  std::sort(bits.begin(), bits.end());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    require(bits[i] >= 0, Errc::invalid_argument, "spectrum exponent must be >= 0");
    require(i == 0 || bits[i] != bits[i - 1], Errc::invalid_argument,
            "spectrum exponents must be distinct");
  }
  Spectrum s;
  s.bits_ = std::move(bits);
  return s;
}

Spectrum Spectrum::pow2(int64_t e) {
  require(e >= 0, Errc::invalid_argument, "spectrum exponent must be >= 0");
  Spectrum s;
  s.bits_ = {e};
  return s;
}

int64_t Spectrum::max_bit() const {
  require(!is_zero(), Errc::precondition_violation, "max_bit of zero");
  return bits_.back();
}

int64_t Spectrum::min_bit() const {
  require(!is_zero(), Errc::precondition_violation, "min_bit of zero");
  return bits_.front();
}

bool Spectrum::test_bit(int64_t e) const {
  return std::binary_search(bits_.begin(), bits_.end(), e);
}

uint64_t Spectrum::variation() const {
  if (bits_.empty()) return 0;
  uint64_t runs = 1;
  for (std::size_t i = 1; i < bits_.size(); ++i)
    if (bits_[i] != bits_[i - 1] + 1) ++runs;
  return 2 * runs;
}

Spectrum Spectrum::xor_with(const Spectrum& other) const {
  Spectrum out;
  std::set_symmetric_difference(bits_.begin(), bits_.end(), other.bits_.begin(),
                                other.bits_.end(), std::back_inserter(out.bits_));
  return out;
}

bool Spectrum::contains(const Spectrum& other) const {
  return std::includes(bits_.begin(), bits_.end(), other.bits_.begin(), other.bits_.end());
}

Spectrum Spectrum::nested_diff(const Spectrum& other) const {
  require(contains(other), Errc::precondition_violation, "not nested");
  Spectrum out;
  std::set_difference(bits_.begin(), bits_.end(), other.bits_.begin(), other.bits_.end(),
                      std::back_inserter(out.bits_));
  return out;
}

Spectrum Spectrum::plus(const Spectrum& other) const {
  // Insert the other operand's exponents one at a time; a collision at
  // exponent c becomes a carry at c+1, which may cascade through a run.
  std::vector<int64_t> cur = bits_;
  for (int64_t e : other.bits_) {
    int64_t c = e;
    auto pos = std::lower_bound(cur.begin(), cur.end(), c);
    while (pos != cur.end() && *pos == c) {
      pos = cur.erase(pos);
      ++c;
    }
    cur.insert(pos, c);
  }
  Spectrum out;
  out.bits_ = std::move(cur);
  return out;
}

Spectrum Spectrum::minus(const Spectrum& other) const {
  require(*this >= other, Errc::precondition_violation, "minus would underflow");
  // Subtract exponent by exponent with borrow. Work on a copy.
  std::vector<int64_t> cur = bits_;
  for (auto it = other.bits_.rbegin(); it != other.bits_.rend(); ++it) {
    int64_t e = *it;
    auto pos = std::lower_bound(cur.begin(), cur.end(), e);
    if (pos != cur.end() && *pos == e) {
      cur.erase(pos);
    } else {
      // borrow from the next set bit above e: 2^f - 2^e = 2^e + ... + 2^(f-1)
      require(pos != cur.end(), Errc::invariant_violation, "borrow failed");
      int64_t f = *pos;
      std::vector<int64_t> run;
      run.reserve(static_cast<std::size_t>(f - e));
      for (int64_t b = e; b < f; ++b) run.push_back(b);
      auto idx = static_cast<std::ptrdiff_t>(pos - cur.begin());
      cur.erase(cur.begin() + idx);
      cur.insert(cur.begin() + idx, run.begin(), run.end());
    }
  }
  Spectrum out;
  out.bits_ = std::move(cur);
  return out;
}

Spectrum Spectrum::shl(int64_t k) const {
  require(k >= 0, Errc::invalid_argument, "shl by negative");
  Spectrum out;
  out.bits_.reserve(bits_.size());
  for (int64_t e : bits_) out.bits_.push_back(e + k);
  return out;
}

std::strong_ordering Spectrum::operator<=>(const Spectrum& other) const {
  // Compare exponent lists from the top.
  auto a = bits_.rbegin(), ae = bits_.rend();
  auto b = other.bits_.rbegin(), be = other.bits_.rend();
  for (; a != ae && b != be; ++a, ++b) {
    if (*a != *b) return *a <=> *b;
  }
  if (a != ae) return std::strong_ordering::greater;
  if (b != be) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::optional<uint64_t> Spectrum::value() const {
  if (bits_.empty()) return 0;
  if (bits_.back() >= 64) return std::nullopt;
  uint64_t v = 0;
  for (int64_t e : bits_) v |= (uint64_t{1} << e);
  return v;
}

uint64_t Spectrum::value_or_throw() const {
  auto v = value();
  require(v.has_value(), Errc::out_of_range, "value exceeds 64 bits");
  return *v;
}

double Spectrum::approx() const {
  double v = 0.0;
  for (auto it = bits_.rbegin(); it != bits_.rend(); ++it) {
    if (*it > 1020) return std::numeric_limits<double>::infinity();
    v += std::ldexp(1.0, static_cast<int>(*it));
  }
  return v;
}

std::string Spectrum::str() const {
  if (auto v = value()) return std::to_string(*v);
  std::ostringstream os;
  for (auto it = bits_.rbegin(); it != bits_.rend(); ++it) {
    if (it != bits_.rbegin()) os << " + ";
    os << "2^" << *it;
  }
  return os.str();
}

} // namespace walshlab
