#include "walshlab/witness.hpp"

#include <algorithm>
#include <cmath>

#include "walshlab/error.hpp"
#include "walshlab/sequences.hpp"
#include "walshlab/walsh_point.hpp"

namespace walshlab {

namespace {

// phi(2^(2n)) as an exact ratio; n must be small enough to exponent-code.
ExpRatio phi_at_knot_scale(const PiecewiseConvex& phi, const Spectrum& n) {
  auto nv = n.value();
  require(nv.has_value() && *nv <= (uint64_t{1} << 61), Errc::out_of_range,
          "level value exceeds the exponent-coded range");
  return phi.eval_form(ExpQ(Rat64(1), 2 * static_cast<int64_t>(*nv)));
}

// M_j * phi(2^(2n)) * 2^j <= V * 2^(2n), all exact.
bool term_within_budget(const PiecewiseConvex& phi, const Spectrum& n, int j) {
  require(j >= 1 && j <= 40, Errc::invalid_argument, "truncation out of range");
  ExpRatio value = phi_at_knot_scale(phi, n);
  int64_t e = 2 * static_cast<int64_t>(n.value_or_throw());
  ComboBuilder combo; // sign of M_j 2^j num - V 2^(2n) den
  for (const auto& t : value.num.terms) combo.add(t.q * Rat64(j), t.e + j);
  Rat64 v(static_cast<int64_t>(n.variation()));
  for (const auto& t : value.den.terms) combo.add(-(t.q * v), t.e + e);
  return combo.sign() <= 0;
}

double term_approx_log2(const PiecewiseConvex& phi, const Spectrum& n, int j) {
  ExpRatio value = phi_at_knot_scale(phi, n);
  double e = 2.0 * static_cast<double>(n.value_or_throw());
  return std::log2(static_cast<double>(j)) + value.approx_log2() - e -
         std::log2(static_cast<double>(n.variation()));
}

// Lower-bound degree recursion: smallest admissible candidates, pushed until
// the prefix runs out. Any true construction dominates it step by step, so
// when the prefix is exhausted the pending spacing bound undercuts the true
// degree (the pending index must exceed every scanned candidate).
struct DegreeProbe {
  bool completed = false; // all 2^N steps placed inside the prefix
  Spectrum lower_bound;   // certified lower bound for the true degree
};

DegreeProbe probe_degree(const std::vector<Spectrum>& seq, std::size_t level, int resolution,
                         int64_t out_bit) {
  DegreeProbe probe;
  const Spectrum& n = seq[level - 1];
  const Spectrum m_pow = Spectrum::pow2(out_bit);
  Spectrum bound = m_pow.plus(Spectrum::from_value(1));
  std::size_t k = level;
  const uint64_t factors = uint64_t{1} << resolution;
  for (uint64_t step = 0; step < factors; ++step) {
    bool found = false;
    for (; k < seq.size(); ++k) {
      Spectrum candidate = seq[k].nested_diff(n);
      if (candidate >= bound) {
        probe.lower_bound = candidate;
        bound = candidate.plus(m_pow).shl(1);
        ++k;
        found = true;
        break;
      }
    }
    if (!found) {
      probe.lower_bound = bound;
      return probe;
    }
  }
  probe.completed = true;
  return probe;
}

} // namespace

WitnessPlan plan_levels(const std::vector<Spectrum>& seq, const PiecewiseConvex& phi,
                        int truncation) {
  require(truncation >= 1 && truncation <= 40, Errc::invalid_argument,
          "truncation out of range");
  auto rep = classify_sequence(seq);
  require(rep.nested && rep.unbounded_variation_evidence, Errc::precondition_violation,
          "need a nested prefix with growing variation");

  // evidence that phi vanishes against the sequence growth: the ratio
  // phi(2^(2n)) / (V 2^(2n)) strictly drops from the first scanned term to
  // the last exponent-codable one
  std::size_t scan_top = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto v = seq[i].value();
    if (v.has_value() && *v <= (uint64_t{1} << 61) &&
        !phi.beyond_scan(ExpQ(Rat64(1), 2 * static_cast<int64_t>(*v))))
      scan_top = i;
  }
  require(scan_top >= 1, Errc::precondition_violation, "scan range too small for evidence");
  {
    ExpRatio first = phi_at_knot_scale(phi, seq[0]);
    ExpRatio last = phi_at_knot_scale(phi, seq[scan_top]);
    int64_t e0 = 2 * static_cast<int64_t>(seq[0].value_or_throw());
    int64_t e1 = 2 * static_cast<int64_t>(seq[scan_top].value_or_throw());
    // first/(V_0 2^e0) > last/(V_t 2^e1)
    ComboBuilder combo;
    Rat64 v0(static_cast<int64_t>(seq[0].variation()));
    Rat64 v1(static_cast<int64_t>(seq[scan_top].variation()));
    for (const auto& t : expsum_mul(first.num, last.den).terms) combo.add(t.q * v1, t.e + e1);
    for (const auto& t : expsum_mul(last.num, first.den).terms) combo.add(-(t.q * v0), t.e + e0);
    require(combo.sign() > 0, Errc::precondition_violation,
            "no evidence that phi vanishes against the sequence growth");
  }

  WitnessPlan plan;
  plan.seq = seq;
  std::size_t min_level = 1; // 1-based
  for (int j = 1; j <= truncation; ++j) {
    PlanLevel lvl;
    lvl.position = j;
    lvl.weight_num = Rat64(j);

    bool placed = false;
    for (std::size_t v = min_level; v <= scan_top + 1; ++v) {
      if (!term_within_budget(phi, seq[v - 1], j)) continue;
      lvl.level = v;
      lvl.n_level = seq[v - 1];
      lvl.variation = lvl.n_level.variation();
      lvl.term_ok = true;
      lvl.term_approx = std::exp2(term_approx_log2(phi, seq[v - 1], j));
      placed = true;
      break;
    }
    require(placed, Errc::prefix_too_short,
            "no level fits the budget at slot " + std::to_string(j));

    // degree bookkeeping at the chosen level
    int resolution = static_cast<int>(lvl.n_level.max_bit()) + 1;
    int64_t out_bit = minimal_out_of_spectrum(seq, resolution);
    if ((uint64_t{1} << resolution) <= (uint64_t{1} << 11)) {
      auto base = build_base(seq, lvl.level);
      auto deltas = select_deltas(seq, base, out_bit);
      uint64_t deg_g = fwht(base.sign_grid).degree();
      lvl.degree = deltas.back().delta.plus(Spectrum::from_value(deg_g));
      lvl.cap_exact = true;
    } else {
      DegreeProbe probe = probe_degree(seq, lvl.level, resolution, out_bit);
      lvl.degree = probe.lower_bound;
      lvl.cap_exact = false;         // either incomplete or branch-blind
    }

    if (lvl.cap_exact) {
      bool cap_found = false;
      for (std::size_t t = 0; t < seq.size(); ++t)
        if (seq[t] >= lvl.degree) {
          lvl.cap = seq[t];
          lvl.cap_index = t;
          cap_found = true;
          break;
        }
      require(cap_found, Errc::prefix_too_short, "cap beyond the scanned prefix");
      if (lvl.cap_index + 2 < seq.size()) {
        lvl.alpha_index = lvl.cap_index + 1;
        lvl.beta_index = lvl.cap_index + 2;
        lvl.has_gap = true;
      }
    }

    bool last_slot = j == truncation;
    if (!last_slot) {
      require(lvl.cap_exact, Errc::prefix_too_short,
              "cannot place another level past an unresolved cap");
      require(lvl.has_gap, Errc::prefix_too_short, "no spare terms beyond the cap");
      min_level = lvl.beta_index + 2; // 1-based: strictly past n_beta
      require(min_level <= seq.size(), Errc::prefix_too_short, "prefix exhausted after the gap");
    }
    plan.levels.push_back(std::move(lvl));
  }
  return plan;
}

WitnessLab::WitnessLab(WitnessPlan plan, const WitnessConfig& config)
    : plan_(std::move(plan)), config_(config) {
  require(!plan_.levels.empty(), Errc::invalid_argument, "empty plan");
  sample_resolution_ = 8;
  for (const auto& lvl : plan_.levels) {
    int resolution = static_cast<int>(lvl.n_level.max_bit()) + 1;
    if ((uint64_t{1} << resolution) <= config_.artifact_max_factors) {
      Lemma1Artifact art = build_lemma1(plan_.seq, lvl.level, config_.lemma1);
      sample_resolution_ = std::max(
          sample_resolution_, static_cast<int>(art.deltas.back().delta.max_bit()) + 9);
      artifacts_.emplace(static_cast<std::size_t>(lvl.position), std::move(art));
    }
  }
  require(!artifacts_.empty(), Errc::invalid_argument, "no level is small enough to construct");
}

DyadicPoint WitnessLab::sample_point(std::mt19937_64& rng) const {
  return DyadicPoint::random(sample_resolution_, rng);
}

WitnessEvaluation WitnessLab::evaluate(const DyadicPoint& x) const {
  WitnessEvaluation ev;
  const auto& levels = plan_.levels;

  // weights of all levels, and the certified constant contribution of the
  // levels above a given cut
  std::vector<Rat64> weights;
  for (const auto& lvl : levels) weights.push_back(lvl.weight());

  // the one-level floor: the top evaluated level must beat
  // weight * V/16 minus everything the other levels can add
  {
    const PlanLevel& lead = levels.front();
    Rat64 floor = lead.weight() * Rat64(static_cast<int64_t>(lead.variation), 16);
    for (std::size_t i = 1; i < levels.size(); ++i) floor = floor - weights[i];
    ev.top_level_floor = floor;
  }

  bool first = true;
  for (const auto& [pos, art] : artifacts_) {
    const PlanLevel& lvl = levels[pos - 1];
    for (std::size_t step = 0; step < art.deltas.size(); ++step) {
      const Spectrum& cut = art.designated_cut(step);
      CutPair pair = eval_cut(art, x, step);
      const CutValue& val = art.deltas[step].branch == Branch::upper_cut ? pair.upper : pair.lower;

      // assemble S_cut(f*) = w_p * val + lower-level full values + unit tails
      Rat64 total(0);
      bool exact = true;
      double approx = 0.0;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        const PlanLevel& other = levels[i];
        if (other.position == lvl.position) {
          if (val.head_zero() || val.head_log2 <= 45) {
            total = total + weights[i] * val.to_rat();
          } else {
            exact = false;
          }
          approx += weights[i].approx() * val.approx();
        } else if (other.position < lvl.position) {
          // the cut clears this lower level's whole spectrum
          require(other.cap_exact && cut > other.degree, Errc::invariant_violation,
                  "cut does not clear a lower level's degree");
          auto it = artifacts_.find(static_cast<std::size_t>(other.position));
          require(it != artifacts_.end(), Errc::invariant_violation,
                  "lower level lacks an artifact");
          CutValue full = eval_product(it->second, x);
          if (full.head_zero() || full.head_log2 <= 45) {
            total = total + weights[i] * full.to_rat();
          } else {
            exact = false;
          }
          approx += weights[i].approx() * full.approx();
        } else {
          // the cut sits below this higher level's nonzero spectrum, whose
          // indices exceed 2^(max Sp(n) + 1) > n by the selection rules
          require(lvl.cap_exact && cut <= lvl.cap, Errc::invariant_violation,
                  "designated cut escaped its cap");
          require(lvl.cap < other.n_level, Errc::invariant_violation,
                  "plan levels are not separated");
          total = total + weights[i];
          approx += weights[i].approx();
        }
      }

      WitnessEvaluation::CutRow row;
      row.position = pos;
      row.step = step;
      row.cut = cut;
      row.value = exact ? total : Rat64(0);
      row.exact = exact;
      row.approx = exact ? total.approx() : approx;
      ev.rows.push_back(row);

      Rat64 mag = total.abs();
      double mag_approx = std::abs(approx);
      bool better = first || (exact && ev.sup_exact ? mag > ev.sup : mag_approx > ev.sup_approx);
      if (better) {
        ev.sup = exact ? mag : Rat64(0);
        ev.sup_exact = exact;
        ev.sup_approx = exact ? mag.approx() : mag_approx;
        ev.arg_position = pos;
        ev.arg_step = step;
        first = false;
      }
    }
  }
  require(!first, Errc::invariant_violation, "no designated cut was evaluated");

  for (const auto& lvl : levels) {
    if (ev.sup_exact && ev.sup >= lvl.level_bound()) ev.clears_some_level_bound = true;
    if (!ev.sup_exact && ev.sup_approx >= lvl.level_bound().approx())
      ev.clears_some_level_bound = true;
  }
  if (ev.sup_exact) ev.clears_top_level_floor = ev.sup >= ev.top_level_floor;

  // flat segments: assemble S_{n_alpha}(f*) and S_{n_beta}(f*) per level and
  // subtract; each level contributes through a certified identity
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const PlanLevel& lvl = levels[i];
    if (!lvl.has_gap) continue;
    const Spectrum& alpha = plan_.seq[lvl.alpha_index];
    const Spectrum& beta = plan_.seq[lvl.beta_index];
    Rat64 at_alpha(0), at_beta(0);
    for (std::size_t t = 0; t < levels.size(); ++t) {
      const PlanLevel& other = levels[t];
      if (other.position <= lvl.position) {
        // both cuts lie above this level's degree, so each partial sum is
        // the full polynomial value
        require(other.cap_exact && alpha > other.degree && beta > other.degree,
                Errc::invariant_violation, "gap cuts do not clear a lower level");
        auto it = artifacts_.find(static_cast<std::size_t>(other.position));
        if (it != artifacts_.end()) {
          CutValue full = eval_product(it->second, x);
          if (full.head_zero() || full.head_log2 <= 45) {
            Rat64 v = weights[t] * full.to_rat();
            at_alpha = at_alpha + v;
            at_beta = at_beta + v;
          }
        }
      } else {
        // both cuts lie below this level's nonzero spectrum, leaving only
        // the unit constant
        require(beta < other.n_level, Errc::invariant_violation,
                "gap cuts reach into a higher level");
        at_alpha = at_alpha + weights[t];
        at_beta = at_beta + weights[t];
      }
    }
    ev.flat_defects.push_back(at_beta - at_alpha);
  }
  return ev;
}

WitnessSummary WitnessLab::run() const {
  WitnessSummary summary;
  for (const auto& lvl : plan_.levels) summary.level_bounds.push_back(lvl.level_bound());
  std::mt19937_64 rng(config_.seed);
  for (uint64_t p = 0; p < config_.samples; ++p) {
    DyadicPoint x = sample_point(rng);
    WitnessEvaluation ev = evaluate(x);
    summary.points++;
    if (ev.clears_some_level_bound) summary.bound_hits++;
    if (ev.clears_top_level_floor) summary.floor_hits++;
    bool flat = true;
    for (const auto& d : ev.flat_defects)
      if (!d.is_zero()) flat = false;
    if (flat) summary.flat_zero_points++;
  }
  return summary;
}

Spectrum SparsePoly::degree() const {
  require(!terms.empty(), Errc::invalid_argument, "empty polynomial");
  return terms.back().first;
}

Rat64 SparsePoly::eval(const DyadicPoint& x) const {
  Rat64 acc(0);
  for (const auto& [idx, coef] : terms) acc = acc + coef * Rat64(walsh_eval(idx, x));
  return acc;
}

SparsePoly SparsePoly::random(uint64_t max_degree, std::size_t max_terms, std::mt19937_64& rng) {
  SparsePoly p;
  std::size_t count = 1 + rng() % max_terms;
  std::vector<uint64_t> indices;
  for (std::size_t i = 0; i < count; ++i) indices.push_back(rng() % (max_degree + 1));
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (uint64_t idx : indices) {
    int64_t coef = static_cast<int64_t>(rng() % 16) - 8;
    if (coef == 0) coef = 8;
    p.terms.push_back({Spectrum::from_value(idx), Rat64(coef)});
  }
  return p;
}

RelocationResult spectral_relocate(const SparsePoly& poly, const WitnessPlan& plan,
                                   uint64_t seed, uint64_t sample_points) {
  require(!poly.terms.empty(), Errc::invalid_argument, "empty polynomial");
  Spectrum deg = poly.degree();

  const PlanLevel* host = nullptr;
  for (const auto& lvl : plan.levels) {
    if (!lvl.has_gap) continue;
    if (deg < plan.seq[lvl.alpha_index]) {
      host = &lvl;
      break;
    }
  }
  require(host != nullptr, Errc::precondition_violation, "degree exceeds anchor");

  const Spectrum& alpha = plan.seq[host->alpha_index];
  const Spectrum& beta = plan.seq[host->beta_index];
  RelocationResult result;
  result.gap_position = static_cast<std::size_t>(host->position);
  result.shift = beta.nested_diff(alpha);

  result.window_ok = true;
  result.vanishes_below_anchor = true;
  result.full_at_window_top = true;
  result.index_addition_ok = true;
  for (const auto& [idx, coef] : poly.terms) {
    Spectrum moved = result.shift ^ idx;
    if (!(moved == result.shift.plus(idx))) result.index_addition_ok = false;
    if (!(moved > alpha && moved <= beta)) result.window_ok = false;
    if (!(moved > alpha)) result.vanishes_below_anchor = false;
    if (!(moved < beta)) result.full_at_window_top = false;
    result.relocated.terms.push_back({moved, coef});
  }

  // |relocated| = |original| pointwise: the shift only modulates by a sign
  std::mt19937_64 rng(seed);
  int resolution = static_cast<int>(result.shift.max_bit()) + 9;
  result.modulus_preserved = true;
  for (uint64_t p = 0; p < sample_points; ++p) {
    DyadicPoint x = DyadicPoint::random(resolution, rng);
    Rat64 moved = result.relocated.eval(x);
    Rat64 original = poly.eval(x);
    int sign = walsh_eval(result.shift, x);
    if (!(moved == original * Rat64(sign))) result.modulus_preserved = false;
    if (!(moved.abs() == original.abs())) result.modulus_preserved = false;
  }
  return result;
}

} // namespace walshlab
