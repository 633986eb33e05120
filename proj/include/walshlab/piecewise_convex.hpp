#ifndef WALSHLAB_PIECEWISE_CONVEX_HPP
#define WALSHLAB_PIECEWISE_CONVEX_HPP

#include <cstdint>
#include <vector>

#include "walshlab/exact_linear.hpp"
#include "walshlab/rational.hpp"

namespace walshlab {

/// Increasing piecewise-linear function on [0, infinity) with phi(0) = 0,
/// linear from the origin to the first knot and between consecutive knots.
/// Knot abscissae are exponent-coded, so knots such as V * 2^(2n) with n in
/// the trillions are exact. Convexity is a property to verify, not a
/// constructor guarantee; tests want to build violations too.
class PiecewiseConvex {
public:
  /// Behaviour past the last knot.
  enum class Tail {
    scan_limit, ///< not represented; evaluation errors
    linear,     ///< extends with tail_slope
    infinite,   ///< genuinely +infinity (Young conjugates of bounded slope)
  };

  struct Knot {
    ExpQ u;
    ExpSum value;
  };

  PiecewiseConvex() = default;
  static PiecewiseConvex from_knots(std::vector<Knot> knots, Tail tail = Tail::scan_limit,
                                    Rat64 tail_slope = Rat64(0));
  /// phi(u) = slope * u, one knot at 1 plus a linear tail.
  static PiecewiseConvex linear(const Rat64& slope);
  static PiecewiseConvex identity() { return linear(Rat64(1)); }

  const std::vector<Knot>& knots() const { return knots_; }
  Tail tail() const { return tail_; }
  Rat64 tail_slope() const { return tail_slope_; }

  /// -1 head [0, u_0); i in [0, size-1) segment [u_i, u_{i+1}); size-1 tail.
  int locate(const ExpQ& u) const;

  /// Exact value at u as a ratio of exponent-coded sums.
  ExpRatio eval_form(const ExpQ& u) const;
  /// Exact rational value; errors when not representable in Rat64 range.
  Rat64 eval_rat(const Rat64& u) const;
  double eval_log2(double log2_u) const;

  /// Chord slope over segment i (head slope for i = -1) as a ratio.
  ExpRatio chord(int i) const;
  /// Chord slope as a rational; errors when out of Rat64 range.
  Rat64 chord_rat(int i) const;

  /// True when u is past the last knot and the tail is not linear.
  bool beyond_scan(const ExpQ& u) const;

  /// Scale by a rational factor (pointwise).
  PiecewiseConvex scaled(const Rat64& r) const;

private:
  std::vector<Knot> knots_;
  Tail tail_ = Tail::scan_limit;
  Rat64 tail_slope_ = Rat64(0);
};

/// Exact comparison helpers on one function.
struct PhiReport {
  bool increasing = false;
  bool convex = false;
  bool strictly_convex = false;
  bool superlinear_evidence = false;
  struct Delta2 {
    bool holds = false;
    int c = 0; ///< smallest verified integer with phi(2u) <= c*phi(u) on scan
  } delta2;
};

/// Verifies monotonicity/convexity via chord comparisons and the doubling
/// condition at all knots and half-knots (the doubling ratio is monotone on
/// segment interiors, so those points are the extrema).
PhiReport check_phi_properties(const PiecewiseConvex& phi);

} // namespace walshlab

#endif
