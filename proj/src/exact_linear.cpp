#include "walshlab/exact_linear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "walshlab/error.hpp"

namespace walshlab {

namespace {

int bit_length(__int128 v) {
  unsigned __int128 a = v < 0 ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  uint64_t hi = static_cast<uint64_t>(a >> 64);
  if (hi != 0) return 64 + std::bit_width(hi);
  return std::bit_width(static_cast<uint64_t>(a));
}

} // namespace

Rat64 ExpQ::to_rat() const {
  if (q.is_zero()) return Rat64(0);
  require(e >= -62 && e <= 62, Errc::out_of_range, "exponent out of rational range");
  if (e >= 0) return q * Rat64(int64_t{1} << e);
  return q * Rat64(1, int64_t{1} << (-e));
}

double ExpQ::approx() const { return std::ldexp(q.approx(), static_cast<int>(std::clamp<int64_t>(e, -2000, 2000))); }

double ExpQ::approx_log2() const {
  if (q.is_zero()) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(e) + std::log2(std::abs(q.approx()));
}

std::string ExpQ::str() const {
  if (q.is_zero()) return "0";
  std::ostringstream os;
  os << q.str();
  if (e != 0) os << "*2^" << e;
  return os.str();
}

ExpSum ExpSum::scaled_pow2(int64_t k) const {
  ExpSum out;
  out.terms.reserve(terms.size());
  for (const auto& t : terms) out.terms.push_back(t.scaled_pow2(k));
  return out;
}

ExpSum ExpSum::scaled(const Rat64& r) const {
  if (r.is_zero()) return ExpSum();
  ExpSum out;
  out.terms.reserve(terms.size());
  for (const auto& t : terms) out.terms.push_back(t.scaled(r));
  return out;
}

ExpSum ExpSum::plus(const ExpSum& other) const {
  ExpSum out = *this;
  for (const auto& t : other.terms)
    if (!t.is_zero()) out.terms.push_back(t);
  require(out.terms.size() <= 16, Errc::out_of_range, "exponent-coded sum too long");
  return out;
}

ExpSum ExpSum::minus(const ExpSum& other) const {
  ExpSum out = *this;
  for (const auto& t : other.terms)
    if (!t.is_zero()) out.terms.push_back(t.negated());
  require(out.terms.size() <= 16, Errc::out_of_range, "exponent-coded sum too long");
  return out;
}

Rat64 ExpSum::to_rat() const {
  Rat64 acc(0);
  for (const auto& t : terms) acc = acc + t.to_rat();
  return acc;
}

double ExpSum::approx() const {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.approx();
  return acc;
}

double ExpSum::approx_log2() const {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  // anchor on the dominant exponent to stay finite for huge e
  int64_t top = terms.front().e;
  for (const auto& t : terms) top = std::max(top, t.e);
  double acc = 0.0;
  for (const auto& t : terms) {
    int64_t d = t.e - top;
    if (d > -2000) acc += std::ldexp(t.q.approx(), static_cast<int>(d));
  }
  if (acc == 0.0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(top) + std::log2(std::abs(acc));
}

std::string ExpSum::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) os << " + ";
    os << terms[i].str();
  }
  return os.str();
}

void ComboBuilder::add(const Rat64& coef, int64_t exp) {
  if (coef.is_zero()) return;
  terms_.push_back(Term{coef.num(), coef.den(), exp});
}

void ComboBuilder::add_scaled(const ExpSum& s, const Rat64& coef, int64_t exp_shift) {
  for (const auto& t : s.terms) add(coef * t.q, t.e + exp_shift);
}

void ComboBuilder::add_product(const Rat64& coef, const ExpQ& a, const ExpQ& b) {
  add(coef * a.q * b.q, a.e + b.e);
}

int ComboBuilder::sign() const {
  if (terms_.empty()) return 0;

  // Clear denominators with one common scale. The scale multiplies every
  // coefficient, so the sign is unchanged.
  int64_t lcm = 1;
  for (const auto& t : terms_) {
    lcm = std::lcm(lcm, t.den);
    require(lcm <= (int64_t{1} << 40), Errc::out_of_range, "combined denominator too large");
  }
  struct Scaled {
    __int128 c;
    int64_t e;
  };
  std::vector<Scaled> scaled;
  scaled.reserve(terms_.size());
  for (const auto& t : terms_) {
    __int128 c = t.num * (lcm / t.den);
    require(bit_length(c) <= 110, Errc::out_of_range, "combo coefficient too large");
    scaled.push_back(Scaled{c, t.exp});
  }
  std::sort(scaled.begin(), scaled.end(), [](const Scaled& a, const Scaled& b) { return a.e > b.e; });
  // merge equal exponents
  std::vector<Scaled> merged;
  for (const auto& s : scaled) {
    if (!merged.empty() && merged.back().e == s.e) {
      merged.back().c += s.c;
      require(bit_length(merged.back().c) <= 112, Errc::out_of_range, "combo coefficient too large");
    } else {
      merged.push_back(s);
    }
  }

  // suffix bound: |sum_{j >= i} c_j 2^(e_j)| <= R_i * 2^(e_i)
  std::vector<__int128> suffix(merged.size() + 1, 0);
  for (std::size_t i = merged.size(); i-- > 0;) {
    __int128 a = merged[i].c < 0 ? -merged[i].c : merged[i].c;
    suffix[i] = suffix[i + 1] + a;
    require(bit_length(suffix[i]) <= 116, Errc::out_of_range, "combo magnitude too large");
  }

  __int128 r = 0;
  int64_t cur_e = merged.front().e;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    int64_t gap = cur_e - merged[i].e;
    if (r != 0) {
      // a shifted partial sum beyond 2^120 dominates any remaining tail
      if (bit_length(r) + gap > 120) return r > 0 ? 1 : -1;
      r <<= gap;
    }
    cur_e = merged[i].e;
    r += merged[i].c;
    // the value is r*2^cur_e plus a tail bounded by suffix[i+1]*2^(e_{i+1})
    if (i + 1 < merged.size()) {
      __int128 a = r < 0 ? -r : r;
      int64_t next_gap = cur_e - merged[i + 1].e;
      if (a != 0 && bit_length(a) + next_gap > bit_length(suffix[i + 1]) + 1)
        return r > 0 ? 1 : -1;
    }
  }
  return r > 0 ? 1 : (r < 0 ? -1 : 0);
}

int cmp_expsum(const ExpSum& a, const ExpSum& b) {
  ComboBuilder combo;
  combo.add(a);
  for (const auto& t : b.terms) combo.add(t.negated());
  return combo.sign();
}

int expsum_sign(const ExpSum& s) {
  ComboBuilder combo;
  combo.add(s);
  return combo.sign();
}

ExpSum expsum_mul(const ExpSum& a, const ExpSum& b) {
  ExpSum out;
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      ExpQ p(ta.q * tb.q, ta.e + tb.e);
      if (!p.is_zero()) out.terms.push_back(p);
    }
  require(out.terms.size() <= 64, Errc::out_of_range, "exponent-coded product too long");
  return out;
}

double ExpRatio::approx() const { return num.approx() / den.approx(); }

Rat64 ExpRatio::to_rat() const {
  // Normalize shared exponent scale before converting, so huge-but-matching
  // exponents (e.g. V*2^E / 2^E) still come out exactly.
  require(!den.terms.empty(), Errc::invalid_argument, "zero denominator");
  int64_t anchor = den.terms.front().e;
  Rat64 n(0), d(0);
  for (const auto& t : num.terms) n = n + ExpQ(t.q, t.e - anchor).to_rat();
  for (const auto& t : den.terms) d = d + ExpQ(t.q, t.e - anchor).to_rat();
  return n / d;
}

int cmp_ratio(const ExpRatio& a, const ExpRatio& b) {
  require(expsum_sign(a.den) > 0 && expsum_sign(b.den) > 0, Errc::invalid_argument,
          "ratio denominators must be positive");
  return cmp_expsum(expsum_mul(a.num, b.den), expsum_mul(b.num, a.den));
}

int cmp_ratio_rat(const ExpRatio& a, const Rat64& c) {
  require(expsum_sign(a.den) > 0, Errc::invalid_argument, "ratio denominator must be positive");
  return cmp_expsum(a.num, a.den.scaled(c));
}

} // namespace walshlab
