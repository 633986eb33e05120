#include "walshlab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "walshlab/error.hpp"
#include "walshlab/sequences.hpp"

namespace walshlab {

namespace {

int cmp_expq(const ExpQ& a, const ExpQ& b) {
  ComboBuilder combo;
  combo.add(a);
  combo.add(b.negated());
  return combo.sign();
}

// beta(w) <= alpha(w)/2^j
bool dominated_at(const PiecewiseConvex& alpha, const PiecewiseConvex& beta, int j,
                  const ExpQ& w) {
  ExpRatio b = beta.eval_form(w);
  ExpRatio aj = alpha.eval_form(w);
  aj.den = aj.den.scaled_pow2(j);
  return cmp_ratio(b, aj) <= 0;
}

// union of knot abscissae of both functions within [lo, hi], plus endpoints
std::vector<ExpQ> breakpoints_between(const PiecewiseConvex& alpha, const PiecewiseConvex& beta,
                                      const ExpQ& lo, const ExpQ& hi) {
  std::vector<ExpQ> pts;
  pts.push_back(lo);
  for (const auto& k : alpha.knots())
    if (cmp_expq(k.u, lo) > 0 && cmp_expq(k.u, hi) < 0) pts.push_back(k.u);
  for (const auto& k : beta.knots())
    if (cmp_expq(k.u, lo) > 0 && cmp_expq(k.u, hi) < 0) pts.push_back(k.u);
  pts.push_back(hi);
  return pts;
}

} // namespace

PiecewiseConvex build_phi(const std::vector<Spectrum>& seq, std::size_t knot_count) {
  require(knot_count >= 1, Errc::invalid_argument, "need at least one knot");
  require(seq.size() >= std::max<std::size_t>(knot_count, 2), Errc::invalid_argument,
          "sequence prefix too short");
  auto rep = classify_sequence(seq);
  require(rep.nested, Errc::precondition_violation, "sequence is not nested");
  for (std::size_t i = 1; i < knot_count; ++i)
    require(rep.variation_profile[i] > rep.variation_profile[i - 1], Errc::precondition_violation,
            "variation is not strictly increasing on the prefix");

  std::vector<PiecewiseConvex::Knot> knots;
  knots.reserve(knot_count);
  for (std::size_t i = 0; i < knot_count; ++i) {
    auto nv = seq[i].value();
    require(nv.has_value() && *nv <= (uint64_t{1} << 61), Errc::out_of_range,
            "knot exponent exceeds the representable range");
    int64_t e = 2 * static_cast<int64_t>(*nv);
    auto v = static_cast<int64_t>(rep.variation_profile[i]);
    knots.push_back({ExpQ(Rat64(1), e), ExpSum::of(ExpQ(Rat64(v), e))});
  }
  return PiecewiseConvex::from_knots(std::move(knots));
}

std::vector<PhiSlopeInfo> phi_slope_info(const std::vector<Spectrum>& seq,
                                         std::size_t knot_count) {
  require(knot_count >= 2 && seq.size() >= knot_count, Errc::invalid_argument,
          "need at least two knots");
  std::vector<PhiSlopeInfo> out;
  out.reserve(knot_count - 1);
  for (std::size_t i = 0; i + 1 < knot_count; ++i) {
    uint64_t v0 = seq[i].variation();
    uint64_t v1 = seq[i + 1].variation();
    require(v1 > v0, Errc::precondition_violation, "variation must strictly increase");
    uint64_t n0 = seq[i].value_or_throw();
    uint64_t n1 = seq[i + 1].value_or_throw();
    PhiSlopeInfo info;
    info.variation = v0;
    info.delta = v1 - v0;
    info.gap = 2 * static_cast<int64_t>(n1 - n0);
    info.slope_lo = Rat64(static_cast<int64_t>(v0 + info.delta));
    info.slope_hi = Rat64(static_cast<int64_t>(v0 + info.delta + 1));
    // delta / (2^(2 delta) - 1) < 1, trivially so once 2 delta exceeds 62 bits
    info.aux_bound_ok =
        info.delta >= 31 ||
        static_cast<__int128>(info.delta) < ((static_cast<__int128>(1) << (2 * info.delta)) - 1);
    info.gap_matches_delta = n1 - n0 >= info.delta;
    out.push_back(info);
  }
  return out;
}

bool phi_slopes_strictly_increase(const std::vector<Spectrum>& seq, std::size_t knot_count) {
  // slope_v = V_v + delta_v * 2^g/(2^g - 1); the excess over delta_v is below
  // 1 whenever the exponent gap dominates delta, so consecutive slopes differ
  // by more than delta_v - 1 + delta_{v+1} - excess >= 0, strictly.
  auto infos = phi_slope_info(seq, knot_count);
  for (std::size_t i = 0; i < infos.size(); ++i) {
    if (!infos[i].aux_bound_ok || !infos[i].gap_matches_delta) return false;
    if (infos[i].delta < 1) return false;
  }
  return true;
}

GammaResult lemma3_gamma(const PiecewiseConvex& alpha, const PiecewiseConvex& beta) {
  auto alpha_rep = check_phi_properties(alpha);
  require(alpha_rep.increasing && alpha_rep.convex, Errc::precondition_violation,
          "alpha must be increasing and convex");
  require(alpha_rep.superlinear_evidence, Errc::precondition_violation,
          "alpha shows no superlinear growth on the scan");
  require(alpha_rep.delta2.holds, Errc::precondition_violation,
          "alpha fails the doubling scan");

  const auto& aknots = alpha.knots();
  const ExpQ horizon = aknots.back().u;

  auto dominated_from = [&](const ExpQ& start, int j) {
    for (const auto& w : breakpoints_between(alpha, beta, start, horizon)) {
      if (beta.beyond_scan(w)) return false;
      if (!dominated_at(alpha, beta, j, w)) return false;
    }
    return true;
  };

  // tangent at knot k of alpha_j, extended to u: (alpha(k) + s (u - k)) / 2^j
  auto tangent_reaches = [&](std::size_t k, int j, const ExpQ& u, const ExpSum& target_num,
                             const ExpSum& target_den) {
    // alpha chord to the right of knot k
    ExpRatio s = alpha.chord(static_cast<int>(k) == static_cast<int>(aknots.size()) - 1
                                 ? static_cast<int>(k) // tail
                                 : static_cast<int>(k));
    ExpSum du = ExpSum::of(u).minus(ExpSum::of(aknots[k].u));
    // value*den_s + s_num*du, all over den_s, then /2^j
    ExpSum num = expsum_mul(aknots[k].value, s.den).plus(expsum_mul(s.num, du));
    ExpSum den = s.den.scaled_pow2(j);
    // reaches target  <=>  num/den >= target_num/target_den
    return cmp_expsum(expsum_mul(num, target_den), expsum_mul(target_num, den)) >= 0;
  };

  GammaResult result;
  std::vector<std::size_t> starts; // knot indices of u_1, u_2, ...
  for (int j = 1;; ++j) {
    std::size_t from = starts.empty() ? 0 : starts.back() + 1;
    bool found = false;
    for (std::size_t k = from; k < aknots.size(); ++k) {
      if (!dominated_from(aknots[k].u, j)) continue;
      if (!starts.empty()) {
        // chain condition: the tangent of alpha_{j-1} at u_{j-1} must stay
        // below alpha_j(u_j)
        std::size_t prev = starts.back();
        ExpSum tnum = aknots[k].value;
        ExpSum tden = ExpSum::of(ExpQ(Rat64(1), 0)).scaled_pow2(j);
        if (tangent_reaches(prev, j - 1, aknots[k].u, tnum, tden)) continue;
      }
      starts.push_back(k);
      found = true;
      break;
    }
    if (!found) {
      require(j > 1, Errc::precondition_violation, "beta is not o(alpha) on range");
      break;
    }
  }

  // v_j: leftmost knot in [u_j, u_{j+1}) whose tangent reaches the next level
  std::vector<std::size_t> vs(starts.size());
  for (std::size_t p = 0; p + 1 < starts.size(); ++p) {
    int j = static_cast<int>(p) + 1;
    std::size_t next = starts[p + 1];
    ExpSum tnum = aknots[next].value;
    ExpSum tden = ExpSum::of(ExpQ(Rat64(1), 0)).scaled_pow2(j + 1);
    std::size_t v = starts[p];
    while (v < next && !tangent_reaches(v, j, aknots[next].u, tnum, tden)) ++v;
    require(v < next, Errc::invariant_violation, "tangent never reaches the next level");
    vs[p] = v;
  }
  if (!starts.empty()) vs.back() = aknots.size() - 1; // last piece has no cap

  // assemble gamma's knots
  std::vector<PiecewiseConvex::Knot> gknots;
  auto push_knot = [&](const ExpQ& u, const ExpSum& val) {
    if (!gknots.empty() && cmp_expq(gknots.back().u, u) == 0) return;
    gknots.push_back({u, val});
  };
  for (std::size_t p = 0; p < starts.size(); ++p) {
    int j = static_cast<int>(p) + 1;
    std::size_t hi = (p + 1 < starts.size()) ? vs[p] : aknots.size() - 1;
    for (std::size_t k = starts[p]; k <= hi; ++k)
      push_knot(aknots[k].u, aknots[k].value.scaled_pow2(1 - j));
    if (p + 1 < starts.size()) {
      std::size_t next = starts[p + 1];
      push_knot(aknots[next].u, aknots[next].value.scaled_pow2(-j));
    }
  }
  result.gamma = PiecewiseConvex::from_knots(std::move(gknots));

  for (std::size_t p = 0; p < starts.size(); ++p) {
    GammaPiece piece;
    piece.level = static_cast<int>(p) + 1;
    piece.u = aknots[starts[p]].u;
    piece.v = aknots[vs[p]].u;
    piece.has_next = p + 1 < starts.size();
    if (piece.has_next) piece.u_next = aknots[starts[p + 1]].u;
    result.pieces.push_back(piece);
  }
  return result;
}

bool verify_gamma_bracket(const PiecewiseConvex& alpha, const PiecewiseConvex& beta,
                          const GammaResult& result) {
  const auto& aknots = alpha.knots();
  const ExpQ horizon = aknots.back().u;
  for (const auto& piece : result.pieces) {
    const ExpQ hi = piece.has_next ? piece.u_next : horizon;
    for (const auto& w : breakpoints_between(alpha, result.gamma, piece.u, hi)) {
      if (piece.has_next && cmp_expq(w, hi) == 0) break; // next piece owns it
      ExpRatio g = result.gamma.eval_form(w);
      ExpRatio a = alpha.eval_form(w);
      // 2^-j * alpha <= gamma
      if (cmp_ratio(ExpRatio{g.num.scaled_pow2(piece.level), g.den}, a) < 0) return false;
      // gamma <= 2^(1-j) * alpha
      if (cmp_ratio(ExpRatio{g.num.scaled_pow2(piece.level - 1), g.den}, a) > 0) return false;
    }
  }
  // domination past u_1
  if (!result.pieces.empty()) {
    for (const auto& w : breakpoints_between(alpha, beta, result.pieces.front().u, horizon)) {
      if (beta.beyond_scan(w)) return false;
      if (cmp_ratio(result.gamma.eval_form(w), beta.eval_form(w)) < 0) return false;
    }
  }
  return true;
}

NFunctionReport check_nfunction(const PiecewiseConvex& phi) {
  NFunctionReport rep;
  auto base = check_phi_properties(phi);
  rep.increasing = base.increasing;
  rep.convex = base.convex;

  const ExpQ one(Rat64(1), 0);
  // head evidence: the ratio phi(u)/u at the smallest knot is well below the
  // ratio at 1, and shrinks monotonically leftwards (automatic under
  // convexity, checked against constructed violations anyway)
  const auto& ks = phi.knots();
  if (cmp_expq(ks.front().u, one) < 0) {
    ExpRatio first{ks.front().value, ExpSum::of(ks.front().u)};
    ExpRatio at1 = phi.eval_form(one);
    rep.ratio_vanishes_at_zero =
        cmp_ratio(ExpRatio{first.num.scaled(Rat64(16)), first.den}, at1) <= 0;
  }
  // tail evidence: chords strictly increase past 1
  int last = static_cast<int>(ks.size()) - 1;
  int top = phi.tail() == PiecewiseConvex::Tail::linear ? last : last - 1;
  bool any = false, strict = true;
  for (int i = 0; i < top; ++i) {
    if (cmp_expq(ks[static_cast<std::size_t>(i)].u, one) < 0) continue;
    any = true;
    if (cmp_ratio(phi.chord(i), phi.chord(i + 1)) >= 0) strict = false;
  }
  rep.ratio_grows_at_tail = any && strict;
  return rep;
}

NFunctionRepair lemma4_nfunction(const PiecewiseConvex& alpha, const Rat64& eps) {
  require(eps > Rat64(0), Errc::invalid_argument, "eps must be positive");
  auto rep = check_phi_properties(alpha);
  require(rep.increasing && rep.convex, Errc::precondition_violation,
          "alpha must be increasing and convex");

  const ExpQ one(Rat64(1), 0);
  require(!alpha.beyond_scan(one), Errc::precondition_violation, "alpha not defined at 1");
  Rat64 alpha_at_1 = alpha.eval_rat(Rat64(1));
  int seg = alpha.locate(one);
  require(cmp_ratio_rat(alpha.chord(seg), eps * Rat64(2)) >= 0, Errc::precondition_violation,
          "junction breaks convexity");

  const int head_segments = 64;
  std::vector<PiecewiseConvex::Knot> knots;
  for (int k = 1; k <= head_segments; ++k) {
    Rat64 u(k, head_segments);
    Rat64 v = eps * u * u;
    knots.push_back({ExpQ(u, 0), ExpSum::of(ExpQ(v, 0))});
  }
  Rat64 shift = alpha_at_1 - eps; // alpha_eps = alpha - shift past 1
  for (const auto& k : alpha.knots()) {
    if (cmp_expq(k.u, one) <= 0) continue;
    knots.push_back({k.u, k.value.plus(ExpSum::of(ExpQ(-shift, 0)))});
  }
  NFunctionRepair out;
  out.phi = PiecewiseConvex::from_knots(std::move(knots), alpha.tail(), alpha.tail_slope());

  // equivalence certificate against alpha beyond u0 = 2
  out.cert.u0 = Rat64(2);
  const ExpQ two(Rat64(2), 0);
  require(!alpha.beyond_scan(two), Errc::precondition_violation, "alpha not defined at 2");
  Rat64 alpha_at_2 = alpha.eval_rat(Rat64(2));
  Rat64 rel = shift / alpha_at_2;
  out.cert.c = shift >= Rat64(0) ? Rat64(1) - rel : Rat64(1);
  out.cert.C = shift >= Rat64(0) ? Rat64(1) : Rat64(1) - rel;
  out.cert.verified = true;
  for (const auto& k : out.phi.knots()) {
    if (cmp_expq(k.u, two) < 0) continue;
    ExpRatio a = alpha.eval_form(k.u);
    ExpRatio e = ExpRatio::of(k.value);
    if (cmp_ratio(ExpRatio{a.num.scaled(out.cert.c), a.den}, e) > 0) out.cert.verified = false;
    if (cmp_ratio(e, ExpRatio{a.num.scaled(out.cert.C), a.den}) > 0) out.cert.verified = false;
  }
  // the bracket at u0 itself
  {
    ExpRatio a = alpha.eval_form(two);
    ExpRatio e = out.phi.eval_form(two);
    if (cmp_ratio(ExpRatio{a.num.scaled(out.cert.c), a.den}, e) > 0) out.cert.verified = false;
    if (cmp_ratio(e, ExpRatio{a.num.scaled(out.cert.C), a.den}) > 0) out.cert.verified = false;
  }
  return out;
}

PiecewiseConvex young_conjugate(const PiecewiseConvex& phi) {
  auto rep = check_phi_properties(phi);
  require(rep.convex && rep.increasing, Errc::precondition_violation,
          "conjugate needs an increasing convex function");

  // breakpoints and slopes in plain rationals
  std::vector<Rat64> b; // b_0 = 0, then knot abscissae
  std::vector<Rat64> phi_at;
  b.push_back(Rat64(0));
  phi_at.push_back(Rat64(0));
  for (const auto& k : phi.knots()) {
    b.push_back(ExpQ(k.u.q, k.u.e).to_rat());
    phi_at.push_back(k.value.to_rat());
  }
  std::vector<Rat64> slopes; // slope on (b_{i}, b_{i+1})
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    slopes.push_back((phi_at[i + 1] - phi_at[i]) / (b[i + 1] - b[i]));
  bool has_tail = phi.tail() == PiecewiseConvex::Tail::linear;
  if (has_tail) slopes.push_back(phi.tail_slope());

  std::vector<PiecewiseConvex::Knot> knots;
  Rat64 prev_slope(-1);
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    Rat64 s = slopes[i];
    if (!(s > Rat64(0)) || (i > 0 && !(s > prev_slope))) {
      prev_slope = s;
      continue;
    }
    // conjugate value at v = s is attained at the left endpoint b_i
    Rat64 val = b[i] * s - phi_at[i];
    knots.push_back({ExpQ(s, 0), ExpSum::of(ExpQ(val, 0))});
    prev_slope = s;
  }
  require(!knots.empty(), Errc::invalid_argument, "conjugate degenerates");
  if (phi.tail() == PiecewiseConvex::Tail::infinite) {
    // phi stops being finite at its last breakpoint, so the conjugate keeps
    // growing with that breakpoint as its slope
    return PiecewiseConvex::from_knots(std::move(knots), PiecewiseConvex::Tail::linear, b.back());
  }
  // bounded top slope makes the conjugate infinite past it; a scan-limited
  // function leaves the conjugate unscanned there
  auto tail = has_tail ? PiecewiseConvex::Tail::infinite : PiecewiseConvex::Tail::scan_limit;
  return PiecewiseConvex::from_knots(std::move(knots), tail);
}

GrowthWindow growth_window_scan(const PiecewiseConvex& phi) {
  GrowthWindow window;
  std::vector<int64_t> exponents;
  int64_t prev = 3; // u >= 8
  for (const auto& k : phi.knots()) {
    require(k.u.q == Rat64(1), Errc::invalid_argument, "scan expects power-of-two knots");
    if (k.u.e < 3) continue;
    if (k.u.e > prev + 1) exponents.push_back(prev + (k.u.e - prev) / 2);
    exponents.push_back(k.u.e);
    prev = k.u.e;
  }
  require(!exponents.empty(), Errc::invalid_argument, "no scannable knots past 8");
  bool first = true;
  for (int64_t e : exponents) {
    double m = static_cast<double>(e);
    double ratio = std::exp2(phi.eval_log2(m) - m - std::log2(std::log2(m)));
    if (first || ratio < window.c) window.c = ratio;
    if (first || ratio > window.C) window.C = ratio;
    first = false;
    ++window.samples;
  }
  return window;
}

Rat64 orlicz_integral(const StepFn& f, const PiecewiseConvex& phi) {
  std::map<int64_t, int64_t> counts;
  for (int64_t x : f.num()) ++counts[x < 0 ? -x : x];
  Rat64 total(0);
  Rat64 den(int64_t{1} << f.log2_den());
  for (const auto& [mag, count] : counts) {
    if (mag == 0) continue;
    Rat64 u = Rat64(mag) / den;
    require(!phi.beyond_scan(ExpQ::from_rat(u)), Errc::out_of_range,
            "value exceeds the function's representable range");
    total = total + phi.eval_rat(u) * Rat64(count);
  }
  return total * pow2_inv(f.resolution());
}

} // namespace walshlab
