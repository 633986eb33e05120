#include "walshlab/piecewise_convex.hpp"

#include <cmath>

#include "walshlab/error.hpp"

namespace walshlab {

namespace {

int cmp_expq(const ExpQ& a, const ExpQ& b) {
  ComboBuilder combo;
  combo.add(a);
  combo.add(b.negated());
  return combo.sign();
}

} // namespace

PiecewiseConvex PiecewiseConvex::from_knots(std::vector<Knot> knots, Tail tail,
                                            Rat64 tail_slope) {
  require(!knots.empty(), Errc::invalid_argument, "need at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    require(knots[i].u.q > Rat64(0), Errc::invalid_argument, "knot abscissae must be positive");
    require(expsum_sign(knots[i].value) >= 0, Errc::invalid_argument,
            "knot values must be nonnegative");
    if (i > 0) {
      require(cmp_expq(knots[i - 1].u, knots[i].u) < 0, Errc::invalid_argument,
              "knot abscissae must be strictly increasing");
      require(cmp_expsum(knots[i - 1].value, knots[i].value) <= 0, Errc::invalid_argument,
              "knot values must be nondecreasing");
    }
  }
  if (tail == Tail::linear)
    require(tail_slope >= Rat64(0), Errc::invalid_argument, "tail slope must be nonnegative");
  PiecewiseConvex f;
  f.knots_ = std::move(knots);
  f.tail_ = tail;
  f.tail_slope_ = tail_slope;
  return f;
}

PiecewiseConvex PiecewiseConvex::linear(const Rat64& slope) {
  require(slope > Rat64(0), Errc::invalid_argument, "slope must be positive");
  return from_knots({Knot{ExpQ(Rat64(1), 0), ExpSum::of(ExpQ(slope, 0))}}, Tail::linear, slope);
}

int PiecewiseConvex::locate(const ExpQ& u) const {
  require(u.q >= Rat64(0), Errc::invalid_argument, "negative abscissa");
  if (u.is_zero() || cmp_expq(u, knots_.front().u) < 0) return -1;
  int last = static_cast<int>(knots_.size()) - 1;
  for (int i = 0; i < last; ++i)
    if (cmp_expq(u, knots_[static_cast<std::size_t>(i + 1)].u) < 0) return i;
  return last;
}

bool PiecewiseConvex::beyond_scan(const ExpQ& u) const {
  return tail_ != Tail::linear && cmp_expq(u, knots_.back().u) > 0;
}

ExpRatio PiecewiseConvex::eval_form(const ExpQ& u) const {
  if (u.is_zero()) return ExpRatio::of(ExpSum::zero());
  require(!beyond_scan(u), Errc::out_of_range,
          tail_ == Tail::infinite ? "value is infinite there" : "beyond the scanned range");
  int i = locate(u);
  const ExpSum us = ExpSum::of(u);
  if (i == -1) {
    // chord through the origin to the first knot
    return ExpRatio{expsum_mul(knots_.front().value, us), ExpSum::of(knots_.front().u)};
  }
  // knots themselves are exact single values; bypass the segment form
  if (cmp_expq(u, knots_[static_cast<std::size_t>(i)].u) == 0)
    return ExpRatio::of(knots_[static_cast<std::size_t>(i)].value);
  auto seg_eval = [&](const Knot& a, const Knot& b) {
    ExpSum du = ExpSum::of(b.u).minus(ExpSum::of(a.u));
    ExpSum dv = b.value.minus(a.value);
    ExpSum num = expsum_mul(a.value, du).plus(expsum_mul(dv, us.minus(ExpSum::of(a.u))));
    return ExpRatio{num, du};
  };
  int last = static_cast<int>(knots_.size()) - 1;
  if (i < last) {
    return seg_eval(knots_[static_cast<std::size_t>(i)], knots_[static_cast<std::size_t>(i + 1)]);
  }
  // on or past the last knot; tail is linear (beyond_scan was checked), or u
  // equals the last knot exactly
  const Knot& k = knots_.back();
  if (cmp_expq(u, k.u) == 0) return ExpRatio::of(k.value);
  ExpSum num = k.value.plus(us.minus(ExpSum::of(k.u)).scaled(tail_slope_));
  return ExpRatio::of(num);
}

Rat64 PiecewiseConvex::eval_rat(const Rat64& u) const {
  require(u >= Rat64(0), Errc::invalid_argument, "negative abscissa");
  return eval_form(ExpQ::from_rat(u)).to_rat();
}

double PiecewiseConvex::eval_log2(double log2_u) const {
  double e = std::floor(log2_u);
  double m = std::exp2(log2_u - e);
  ExpQ u(Rat64(static_cast<int64_t>(std::llround(m * (1 << 30))), int64_t{1} << 30),
         static_cast<int64_t>(e));
  return eval_form(u).approx_log2();
}

ExpRatio PiecewiseConvex::chord(int i) const {
  int last = static_cast<int>(knots_.size()) - 1;
  require(i >= -1 && i <= last, Errc::invalid_argument, "segment index out of range");
  if (i == -1) return ExpRatio{knots_.front().value, ExpSum::of(knots_.front().u)};
  if (i == last) {
    require(tail_ == Tail::linear, Errc::out_of_range, "no tail slope");
    return ExpRatio::of(ExpSum::of(ExpQ(tail_slope_, 0)));
  }
  const Knot& a = knots_[static_cast<std::size_t>(i)];
  const Knot& b = knots_[static_cast<std::size_t>(i + 1)];
  return ExpRatio{b.value.minus(a.value), ExpSum::of(b.u).minus(ExpSum::of(a.u))};
}

Rat64 PiecewiseConvex::chord_rat(int i) const { return chord(i).to_rat(); }

PiecewiseConvex PiecewiseConvex::scaled(const Rat64& r) const {
  require(r > Rat64(0), Errc::invalid_argument, "scale must be positive");
  std::vector<Knot> ks = knots_;
  for (auto& k : ks) k.value = k.value.scaled(r);
  return from_knots(std::move(ks), tail_, tail_slope_ * r);
}

PhiReport check_phi_properties(const PiecewiseConvex& phi) {
  PhiReport rep;
  const auto& ks = phi.knots();
  int last = static_cast<int>(ks.size()) - 1;
  int top = phi.tail() == PiecewiseConvex::Tail::linear ? last : last - 1;

  rep.increasing = true;
  for (int i = -1; i <= top; ++i)
    if (cmp_ratio_rat(phi.chord(i), Rat64(0)) < 0) rep.increasing = false;

  rep.convex = true;
  rep.strictly_convex = top >= 0;
  for (int i = -1; i < top; ++i) {
    int c = cmp_ratio(phi.chord(i), phi.chord(i + 1));
    if (c > 0) rep.convex = false;
    if (c >= 0) rep.strictly_convex = false;
  }
  rep.superlinear_evidence = rep.convex && rep.strictly_convex;

  // doubling scan: the ratio phi(2u)/phi(u) is monotone wherever u and 2u
  // stay inside fixed segments, so knots and half-knots are the extrema
  std::vector<ExpQ> events;
  for (const auto& k : ks) {
    events.push_back(ExpQ(k.u.q, k.u.e - 1));
    events.push_back(k.u);
  }
  const int candidates[] = {2, 3, 4, 6, 8, 12, 16, 24, 32, 64};
  int needed = 0;
  bool all_bounded = true;
  for (const auto& u : events) {
    ExpQ two_u(u.q, u.e + 1);
    if (phi.beyond_scan(two_u)) continue;
    ExpRatio hi = phi.eval_form(two_u);
    ExpRatio lo = phi.eval_form(u);
    if (expsum_sign(lo.num) == 0) continue; // phi vanishes at 0+ only
    int event_c = 0;
    for (int c : candidates) {
      if (cmp_ratio(hi, ExpRatio{lo.num.scaled(Rat64(c)), lo.den}) <= 0) {
        event_c = c;
        break;
      }
    }
    if (event_c == 0)
      all_bounded = false;
    else
      needed = std::max(needed, event_c);
  }
  rep.delta2.holds = all_bounded && needed > 0;
  rep.delta2.c = needed;
  return rep;
}

} // namespace walshlab
