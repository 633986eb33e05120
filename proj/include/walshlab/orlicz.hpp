#ifndef WALSHLAB_ORLICZ_HPP
#define WALSHLAB_ORLICZ_HPP

#include <cstdint>
#include <vector>

#include "walshlab/grid.hpp"
#include "walshlab/piecewise_convex.hpp"
#include "walshlab/spectrum.hpp"

namespace walshlab {

/// The growth function attached to a nested sequence: value V(n_v) * 2^(2n_v)
/// at the knot 2^(2n_v), linear from the origin to the first knot and between
/// knots. Requires a nested prefix with strictly increasing variation and at
/// least knot_count terms.
PiecewiseConvex build_phi(const std::vector<Spectrum>& seq, std::size_t knot_count);

/// Per-segment slope data for the sequence growth function, kept in the
/// rearranged form slope = V + delta * 2^g / (2^g - 1) so nothing outside
/// [1, V+2] is materialized. The exact excess delta * 2^g/(2^g-1) - delta lies
/// in (0, excess_bound].
struct PhiSlopeInfo {
  uint64_t variation;   // V(n_v)
  uint64_t delta;       // V(n_{v+1}) - V(n_v)
  int64_t gap;          // 2(n_{v+1} - n_v)
  Rat64 slope_lo;       // V + delta (excluded)
  Rat64 slope_hi;       // V + delta + 1 (certified upper bound)
  bool aux_bound_ok;    // delta / (2^(2 delta) - 1) < 1
  bool gap_matches_delta; // n_{v+1} - n_v >= delta, the fact the bound rests on
};
std::vector<PhiSlopeInfo> phi_slope_info(const std::vector<Spectrum>& seq,
                                         std::size_t knot_count);

/// Exact certificate that the slopes of build_phi(seq, K) strictly increase,
/// following the rearranged-slope argument (no huge quantities formed).
bool phi_slopes_strictly_increase(const std::vector<Spectrum>& seq, std::size_t knot_count);

/// One constructed piece of the interpolant below.
struct GammaPiece {
  int level = 0;  // j: gamma = 2*alpha/2^j on [u_j, v_j)
  ExpQ u;         // u_j
  ExpQ v;         // v_j (knot of alpha, or u_j itself)
  bool has_next = false;
  ExpQ u_next;    // u_{j+1} when present
};

struct GammaResult {
  PiecewiseConvex gamma;
  std::vector<GammaPiece> pieces;
};

/// Builds a convex interpolant between beta and alpha: gamma = alpha/2^(j-1)
/// on [u_j, v_j) and linear on [v_j, u_{j+1}), with gamma >= beta past u_1 and
/// gamma/alpha trapped in [2^-j, 2^(1-j)] on [u_j, u_{j+1}). The u_j are
/// chosen leftmost-feasible from alpha's knot set. Errors when beta is not
/// dominated by alpha/2 anywhere on the scanned range.
GammaResult lemma3_gamma(const PiecewiseConvex& alpha, const PiecewiseConvex& beta);

/// Exact check of the per-piece ratio bracket and the domination gamma >= beta.
bool verify_gamma_bracket(const PiecewiseConvex& alpha, const PiecewiseConvex& beta,
                          const GammaResult& result);

struct NFunctionReport {
  bool zero_at_zero = true; // structural
  bool increasing = false;
  bool convex = false;
  bool ratio_vanishes_at_zero = false; // phi(u)/u small and shrinking on the head
  bool ratio_grows_at_tail = false;    // chord slopes strictly increase past 1
  bool passes() const {
    return zero_at_zero && increasing && convex && ratio_vanishes_at_zero && ratio_grows_at_tail;
  }
};
NFunctionReport check_nfunction(const PiecewiseConvex& phi);

struct EquivalenceCert {
  Rat64 c;  // c * alpha <= repaired <= C * alpha beyond u0
  Rat64 C;
  Rat64 u0;
  bool verified = false;
};

struct NFunctionRepair {
  PiecewiseConvex phi;
  EquivalenceCert cert;
};

/// Replaces the head of alpha with the quadratic eps*u^2 on [0,1] (as a
/// 64-segment piecewise-linear approximation) and shifts alpha beyond 1 so the
/// junction is continuous: alpha_eps(u) = alpha(u) - alpha(1) + eps for u > 1.
/// Requires 2*eps <= right derivative of alpha at 1 so the junction stays
/// convex. The certificate compares alpha_eps with alpha beyond u0 = 2.
NFunctionRepair lemma4_nfunction(const PiecewiseConvex& alpha, const Rat64& eps);

/// Young conjugate of a piecewise-linear convex function with phi(0) = 0 and
/// rationally representable knots and slopes. The conjugate of a bounded-slope
/// function is +infinity past the largest slope (Tail::infinite).
PiecewiseConvex young_conjugate(const PiecewiseConvex& phi);

/// 2^-N sum_j phi(|f(cell j)|), exact. Errors when a value falls outside
/// phi's representable range.
Rat64 orlicz_integral(const StepFn& f, const PiecewiseConvex& phi);

/// Scanned bracket for phi(u) / (u log2 log2 u) over [8, last knot], sampled
/// at knot exponents and their midpoints. Constants are numeric evidence,
/// not certified limits.
struct GrowthWindow {
  double c = 0.0; // smallest sampled ratio
  double C = 0.0; // largest sampled ratio
  uint64_t samples = 0;
};
GrowthWindow growth_window_scan(const PiecewiseConvex& phi);

} // namespace walshlab

#endif
