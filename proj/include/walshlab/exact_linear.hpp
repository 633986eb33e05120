#ifndef WALSHLAB_EXACT_LINEAR_HPP
#define WALSHLAB_EXACT_LINEAR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "walshlab/rational.hpp"

namespace walshlab {

/// A scalar q * 2^e with rational q and a (possibly huge, possibly negative)
/// binary exponent e. Covers quantities like V * 2^(2n) whose exponents are
/// far outside floating-point range while the rational part stays small.
struct ExpQ {
  Rat64 q;
  int64_t e = 0;

  ExpQ() = default;
  ExpQ(Rat64 q_, int64_t e_) : q(q_), e(e_) {}
  static ExpQ from_rat(const Rat64& r) { return ExpQ(r, 0); }
  static ExpQ pow2(int64_t e) { return ExpQ(Rat64(1), e); }
  static ExpQ zero() { return ExpQ(Rat64(0), 0); }

  bool is_zero() const { return q.is_zero(); }
  ExpQ scaled_pow2(int64_t k) const { return ExpQ(q, e + k); }
  ExpQ scaled(const Rat64& r) const { return ExpQ(q * r, e); }
  ExpQ negated() const { return ExpQ(-q, e); }

  /// Exact Rat64 value; errors when the exponent pushes it out of range.
  Rat64 to_rat() const;
  double approx() const;
  double approx_log2() const; // of |value|; -inf for zero
  std::string str() const;
};

/// Sum of a few ExpQ terms. Used for knot ordinates that mix scales,
/// e.g. V * 2^(2n) + (eps - a).
struct ExpSum {
  std::vector<ExpQ> terms;

  ExpSum() = default;
  ExpSum(std::initializer_list<ExpQ> ts) : terms(ts) {}
  static ExpSum zero() { return ExpSum(); }
  static ExpSum of(const ExpQ& t) { return t.is_zero() ? ExpSum() : ExpSum{t}; }

  ExpSum scaled_pow2(int64_t k) const;
  ExpSum scaled(const Rat64& r) const;
  ExpSum plus(const ExpSum& other) const;
  ExpSum minus(const ExpSum& other) const;

  Rat64 to_rat() const;
  double approx() const;
  double approx_log2() const;
  std::string str() const;
};

/// Exact sign of a linear combination sum_i c_i * 2^(e_i) with rational c_i.
/// Decides without arbitrary-precision arithmetic: after clearing
/// denominators the terms are scanned from the highest exponent down, and a
/// partial sum that already dominates the remaining terms settles the sign.
class ComboBuilder {
public:
  void add(const Rat64& coef, int64_t exp);
  void add(const ExpQ& t) { add(t.q, t.e); }
  void add(const ExpSum& s) {
    for (const auto& t : s.terms) add(t);
  }
  void add_scaled(const ExpSum& s, const Rat64& coef, int64_t exp_shift);
  /// Adds coef * a * b for ExpQ factors (rational parts multiplied exactly).
  void add_product(const Rat64& coef, const ExpQ& a, const ExpQ& b);

  /// -1, 0, +1. Exact.
  int sign() const;

private:
  struct Term {
    __int128 num;
    int64_t den; // > 0
    int64_t exp;
  };
  std::vector<Term> terms_;
};

/// sign(a - b) for two exponent-coded sums.
int cmp_expsum(const ExpSum& a, const ExpSum& b);

/// Exact sign of an exponent-coded sum.
int expsum_sign(const ExpSum& s);

/// Term-by-term product; term count and coefficient sizes are guarded.
ExpSum expsum_mul(const ExpSum& a, const ExpSum& b);

/// num / den with den > 0. The exact value of a piecewise-linear function at
/// an exponent-coded point has this shape (the denominator is the enclosing
/// segment's width).
struct ExpRatio {
  ExpSum num;
  ExpSum den;

  static ExpRatio of(const ExpSum& s) { return ExpRatio{s, ExpSum::of(ExpQ(Rat64(1), 0))}; }
  double approx_log2() const { return num.approx_log2() - den.approx_log2(); }
  double approx() const;
  Rat64 to_rat() const;
};

/// sign(a - b) for two ratios with positive denominators.
int cmp_ratio(const ExpRatio& a, const ExpRatio& b);
/// sign(a - c) for rational c.
int cmp_ratio_rat(const ExpRatio& a, const Rat64& c);

} // namespace walshlab

#endif
