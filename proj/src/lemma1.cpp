#include "walshlab/lemma1.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "walshlab/error.hpp"
#include "walshlab/sequences.hpp"
#include "walshlab/walsh_point.hpp"

namespace walshlab {

namespace {

Rat64 eighth_variation(const Spectrum& n) {
  return Rat64(static_cast<int64_t>(n.variation()), 8);
}

// |c*(2^a - 1) + s| >= threshold, exact for small a and by domination for
// large a (the head term then dwarfs every other quantity in play).
bool head_branch_clears(int64_t c, uint64_t a, const Rat64& s, const Rat64& threshold) {
  if (a >= 45) {
    if (c != 0) return true;
    return s.abs() >= threshold;
  }
  Rat64 head = Rat64(c) * Rat64((int64_t{1} << a) - 1);
  return (head + s).abs() >= threshold;
}

} // namespace

Lemma1Base build_base(const std::vector<Spectrum>& seq, std::size_t level) {
  require(level >= 1 && level <= seq.size(), Errc::invalid_argument, "level out of range");
  auto rep = classify_sequence(seq);
  require(rep.nested, Errc::precondition_violation, "sequence is not nested");
  require(rep.unbounded_variation_evidence, Errc::precondition_violation,
          "no growing-variation evidence in the prefix");

  Lemma1Base base;
  base.level = level;
  base.n_level = seq[level - 1];
  base.resolution = static_cast<int>(base.n_level.max_bit()) + 1;
  StepFn kernel = dirichlet_dense(base.n_level, base.resolution);
  base.sign_grid = sign_function(kernel);
  base.partial = partial_sum(fwht(base.sign_grid), base.n_level);
  base.kernel_norm = l1_norm(kernel);

  require(base.partial.at_cell(0) == base.kernel_norm, Errc::invariant_violation,
          "partial sum of the kernel sign must equal the kernel norm at 0");
  require(base.kernel_norm >= eighth_variation(base.n_level), Errc::invariant_violation,
          "kernel norm fell below V/8");
  return base;
}

int64_t minimal_out_of_spectrum(const std::vector<Spectrum>& seq, int resolution) {
  require(!seq.empty(), Errc::invalid_argument, "empty sequence");
  auto rep = classify_sequence(seq);
  require(rep.nested, Errc::precondition_violation, "sequence is not nested");
  // Nesting freezes everything below max Sp of the last scanned term, so a
  // vacant bit there is certifiably vacant in all later terms as well.
  const Spectrum& last = seq.back();
  for (int64_t m = resolution; m < last.max_bit(); ++m)
    if (!last.test_bit(m)) return m;
  fail(Errc::cannot_certify, "cannot certify M from the scanned prefix");
}

std::vector<DeltaChoice> select_deltas(const std::vector<Spectrum>& seq, const Lemma1Base& base,
                                       int64_t out_bit) {
  const int n_res = base.resolution;
  const uint64_t factors = uint64_t{1} << n_res;
  const Spectrum& n = base.n_level;
  const Spectrum m_pow = Spectrum::pow2(out_bit);
  const Spectrum lambda = m_pow.minus(n);
  const Rat64 threshold = Rat64(static_cast<int64_t>(n.variation()), 16);
  const auto& g = base.sign_grid.num();
  const int64_t g_home = g[0];
  const Rat64 s_home = base.kernel_norm; // S_{n}(g_j) is constant V-norm on the home cell

  std::vector<DeltaChoice> out;
  out.reserve(factors);
  std::size_t next_source = base.level; // candidates use strictly later terms

  for (uint64_t j = 0; j < factors; ++j) {
    DeltaChoice choice;
    uint64_t active = 0;
    for (uint64_t i = 0; i < j; ++i)
      if (g[j ^ i] != 0) ++active;
    choice.active_count = active;

    // On the home cell the head takes the value 2^active on an exact
    // 2^-active share of the cell and vanishes elsewhere: the modulating
    // characters are independent there. The two measure conditions follow
    // from the indicator values on those two parts.
    bool sum_head = head_branch_clears(g_home, active, s_home, threshold);
    bool sum_zero = active >= 1 && (s_home - Rat64(g_home)).abs() >= threshold;
    bool rem_head = head_branch_clears(g_home, active, Rat64(0), threshold);
    bool rem_zero = active >= 1 && Rat64(g_home).abs() >= threshold;

    choice.cond_sum = active == 0 ? sum_head : (sum_zero || (active == 1 && sum_head));
    choice.cond_rem = active == 0 ? rem_head : (rem_zero || (active == 1 && rem_head));
    if (active <= 40) {
      int64_t den = int64_t{1} << active;
      choice.frac_sum = Rat64(sum_head ? 1 : 0, den) + Rat64(sum_zero ? den - 1 : 0, den);
      choice.frac_rem = Rat64(rem_head ? 1 : 0, den) + Rat64(rem_zero ? den - 1 : 0, den);
      choice.fracs_exact = true;
    }
    // the two cut values differ by the kernel norm >= V/8 = 2 * threshold at
    // every point, so at least one condition always holds
    require(choice.cond_sum || choice.cond_rem, Errc::invariant_violation,
            "both branch measures fell below half");

    choice.branch = choice.cond_sum ? Branch::upper_cut : Branch::lower_cut;

    Spectrum bound = j == 0 ? m_pow.plus(Spectrum::from_value(1))
                            : out.back().delta.plus(m_pow).shl(1);
    bool found = false;
    for (std::size_t k = next_source; k < seq.size(); ++k) {
      require(seq[k].contains(n), Errc::invariant_violation, "prefix lost the nesting");
      require(!seq[k].test_bit(out_bit), Errc::invariant_violation,
              "a scanned spectrum contains the vacant bit");
      Spectrum candidate = seq[k].nested_diff(n);
      if (choice.branch == Branch::lower_cut) candidate = candidate.plus(m_pow);
      if (candidate >= bound) {
        choice.delta = candidate;
        choice.source_index = k;
        next_source = k + 1;
        found = true;
        break;
      }
    }
    require(found, Errc::prefix_too_short, "prefix too short");

    choice.lower_cut = choice.delta.minus(lambda);
    choice.upper_cut = choice.delta.plus(n);
    const Spectrum& aligned =
        choice.branch == Branch::upper_cut ? choice.upper_cut : choice.lower_cut;
    require(aligned == seq[choice.source_index], Errc::invariant_violation,
            "designated cut missed its sequence term");
    out.push_back(std::move(choice));
  }
  return out;
}

Lemma1Artifact assemble_artifact(const std::vector<Spectrum>& seq, Lemma1Base base,
                                 int64_t out_bit, std::vector<DeltaChoice> deltas,
                                 const Lemma1Config& config) {
  Lemma1Artifact art;
  art.seq = seq;
  art.base = std::move(base);
  art.out_bit = out_bit;
  art.lambda = Spectrum::pow2(out_bit).minus(art.base.n_level);
  art.deltas = std::move(deltas);
  require(art.deltas.size() == art.factor_count(), Errc::invalid_argument,
          "wrong number of modulation indices");

  uint64_t deg_g = fwht(art.base.sign_grid).degree();
  art.degree = art.deltas.back().delta.plus(Spectrum::from_value(deg_g));

  bool cap_found = false;
  for (std::size_t t = 0; t < seq.size(); ++t)
    if (seq[t] >= art.degree) {
      art.witness_cap = seq[t];
      art.cap_index = t;
      cap_found = true;
      break;
    }
  require(cap_found, Errc::prefix_too_short, "witness cap lies beyond the scanned prefix");

  int full_res = static_cast<int>(art.degree.max_bit()) + 1;
  if (full_res <= config.dense_resolution_cap) {
    art.dense_resolution = full_res;
    const uint64_t cells = uint64_t{1} << full_res;
    const int n_res = art.base.resolution;
    const auto& g = art.base.sign_grid.num();
    std::vector<uint64_t> masks(art.deltas.size(), 0);
    for (std::size_t j = 0; j < art.deltas.size(); ++j)
      for (int64_t e : art.deltas[j].delta.bits())
        masks[j] |= uint64_t{1} << (full_res - 1 - e);
    std::vector<int64_t> vals(cells);
    for (uint64_t cell = 0; cell < cells; ++cell) {
      uint64_t top = cell >> (full_res - n_res);
      int64_t v = 1;
      for (std::size_t j = 0; j < masks.size(); ++j) {
        int w = (std::popcount(cell & masks[j]) & 1) ? -1 : 1;
        v *= 1 + w * g[top ^ j];
        if (v == 0) break;
      }
      vals[cell] = v;
    }
    art.dense = StepFn::from_integers(full_res, std::move(vals));
  }
  return art;
}

Lemma1Artifact build_lemma1(const std::vector<Spectrum>& seq, std::size_t level,
                            const Lemma1Config& config) {
  Lemma1Base base = build_base(seq, level);
  require((uint64_t{1} << base.resolution) <= config.max_factors, Errc::out_of_range,
          "factor count exceeds the configured limit");
  int64_t m = minimal_out_of_spectrum(seq, base.resolution);
  auto deltas = select_deltas(seq, base, m);
  return assemble_artifact(seq, std::move(base), m, std::move(deltas), config);
}

bool CutValue::abs_at_least(const Rat64& threshold) const {
  if (head_scale == 0) return rest.abs() >= threshold;
  if (head_log2 <= 45) return to_rat().abs() >= threshold;
  // |head| >= 2^46 while |rest| and the threshold stay at unit scale
  return true;
}

Rat64 CutValue::to_rat() const {
  if (head_scale == 0) return rest;
  require(head_log2 <= 45, Errc::out_of_range, "head exceeds the exact rational range");
  return Rat64(head_scale) * Rat64(int64_t{1} << head_log2) + rest;
}

double CutValue::approx() const {
  double head = head_scale == 0
                    ? 0.0
                    : head_scale * std::exp2(static_cast<double>(std::min<int64_t>(head_log2, 1000)));
  return head + rest.approx();
}

namespace {

struct StepEval {
  bool head_zero;
  int64_t head_log2; // head before this step's factor
  int w;             // modulating sign at x
  int64_t g_val;     // translated base value at x
  Rat64 s_val;       // translated partial-sum value at x
};

// incremental head evaluation across all steps at one point
std::vector<StepEval> evaluate_steps(const Lemma1Artifact& art, const DyadicPoint& x) {
  const int n_res = art.base.resolution;
  const uint64_t cx = x.cell_index(n_res);
  const auto& g = art.base.sign_grid.num();
  std::vector<StepEval> out;
  out.reserve(art.deltas.size());
  bool head_zero = false;
  int64_t head_log2 = 0;
  for (std::size_t j = 0; j < art.deltas.size(); ++j) {
    StepEval ev;
    ev.head_zero = head_zero;
    ev.head_log2 = head_log2;
    ev.w = walsh_eval(art.deltas[j].delta, x);
    ev.g_val = g[cx ^ j];
    ev.s_val = art.base.partial.at_cell(cx ^ j);
    out.push_back(ev);
    int64_t f = 1 + ev.w * ev.g_val;
    if (f == 0) head_zero = true;
    if (f == 2) ++head_log2;
  }
  return out;
}

CutPair cut_from_step(const StepEval& ev) {
  CutPair pair;
  int scale = static_cast<int>(1 + ev.w * ev.g_val); // 0, 1 or 2
  Rat64 rest_low = Rat64(-ev.w * ev.g_val);
  pair.lower.head_scale = ev.head_zero ? 0 : scale;
  pair.lower.head_log2 = ev.head_log2;
  pair.lower.rest = rest_low;
  pair.gap = ev.s_val * Rat64(ev.w);
  pair.upper = pair.lower;
  pair.upper.rest = rest_low + pair.gap;
  return pair;
}

} // namespace

CutPair eval_cut(const Lemma1Artifact& artifact, const DyadicPoint& x, std::size_t step) {
  require(step < artifact.deltas.size(), Errc::invalid_argument, "step out of range");
  auto evs = evaluate_steps(artifact, x);
  return cut_from_step(evs[step]);
}

CutValue eval_product(const Lemma1Artifact& artifact, const DyadicPoint& x) {
  const int n_res = artifact.base.resolution;
  const uint64_t cx = x.cell_index(n_res);
  const auto& g = artifact.base.sign_grid.num();
  CutValue v;
  v.head_scale = 1;
  v.head_log2 = 0;
  v.rest = Rat64(0);
  for (std::size_t j = 0; j < artifact.deltas.size(); ++j) {
    int w = walsh_eval(artifact.deltas[j].delta, x);
    int64_t f = 1 + w * g[cx ^ j];
    if (f == 0) {
      v.head_scale = 0;
      v.head_log2 = 0;
      return v;
    }
    if (f == 2) ++v.head_log2;
  }
  return v;
}

ExtractionReport extract_set(const Lemma1Artifact& artifact, uint64_t samples_per_cell,
                             uint64_t seed) {
  ExtractionReport rep;
  rep.threshold = artifact.witness_threshold();
  const int n_res = artifact.base.resolution;
  const uint64_t coarse = uint64_t{1} << n_res;
  rep.cells.resize(coarse);
  rep.witness_cap_ok = true;

  if (artifact.dense.has_value()) {
    rep.exact = true;
    const int full_res = artifact.dense_resolution;
    const uint64_t cells = uint64_t{1} << full_res;
    const uint64_t per_coarse = cells >> n_res;
    WalshCoeffs coeffs = fwht(*artifact.dense);
    std::vector<uint32_t> witness(cells, UINT32_MAX);
    for (std::size_t step = 0; step < artifact.deltas.size(); ++step) {
      StepFn s = partial_sum(coeffs, artifact.designated_cut(step));
      // |value| >= V/16 as integers: |num| * 16 >= V * 2^log2_den
      const __int128 bar = static_cast<__int128>(artifact.variation()) << s.log2_den();
      const auto& num = s.num();
      const uint32_t source = static_cast<uint32_t>(artifact.deltas[step].source_index);
      for (uint64_t cell = 0; cell < cells; ++cell) {
        __int128 mag = num[cell] < 0 ? -static_cast<__int128>(num[cell])
                                     : static_cast<__int128>(num[cell]);
        if (mag * 16 >= bar && witness[cell] == UINT32_MAX) witness[cell] = source;
      }
    }
    for (uint64_t cell = 0; cell < cells; ++cell) {
      uint64_t jc = cell >> (full_res - n_res);
      rep.cells[jc].total++;
      if (witness[cell] != UINT32_MAX) {
        rep.cells[jc].hits++;
        rep.max_witness_source = std::max<uint64_t>(rep.max_witness_source, witness[cell]);
        if (witness[cell] > artifact.cap_index) rep.witness_cap_ok = false;
      }
    }
    rep.points = cells;
  } else {
    rep.exact = false;
    std::mt19937_64 rng(seed);
    const int fine_bits = static_cast<int>(artifact.deltas.back().delta.max_bit()) + 1 - n_res;
    for (uint64_t jc = 0; jc < coarse; ++jc) {
      for (uint64_t s = 0; s < samples_per_cell; ++s) {
        std::vector<uint8_t> bits(static_cast<std::size_t>(n_res + fine_bits));
        for (int b = 0; b < n_res; ++b)
          bits[static_cast<std::size_t>(b)] = static_cast<uint8_t>((jc >> (n_res - 1 - b)) & 1u);
        for (int b = 0; b < fine_bits; ++b)
          bits[static_cast<std::size_t>(n_res + b)] = static_cast<uint8_t>(rng() & 1u);
        DyadicPoint x = DyadicPoint::from_bits(std::move(bits));
        auto evs = evaluate_steps(artifact, x);
        bool hit = false;
        uint64_t source = 0;
        for (std::size_t step = 0; step < evs.size() && !hit; ++step) {
          CutPair pair = cut_from_step(evs[step]);
          const CutValue& designated =
              artifact.deltas[step].branch == Branch::upper_cut ? pair.upper : pair.lower;
          if (designated.abs_at_least(rep.threshold)) {
            hit = true;
            source = artifact.deltas[step].source_index;
          }
        }
        rep.cells[jc].total++;
        if (hit) {
          rep.cells[jc].hits++;
          rep.max_witness_source = std::max(rep.max_witness_source, source);
          if (source > artifact.cap_index) rep.witness_cap_ok = false;
        }
        rep.points++;
      }
    }
  }

  rep.all_cells_quarter = true;
  for (uint64_t jc = 0; jc < coarse; ++jc) {
    rep.cells[jc].cell = jc;
    rep.cells[jc].fraction =
        Rat64(static_cast<int64_t>(rep.cells[jc].hits), static_cast<int64_t>(rep.cells[jc].total));
    if (rep.cells[jc].fraction < Rat64(1, 4)) rep.all_cells_quarter = false;
  }
  if (rep.exact)
    require(rep.all_cells_quarter, Errc::invariant_violation,
            "a cell's exact coverage fell below a quarter");
  return rep;
}

std::vector<Verdict> verify_artifact(const Lemma1Artifact& art, uint64_t seed,
                                     uint64_t sample_points) {
  std::vector<Verdict> out;
  auto push = [&](const std::string& tag, bool pass, const std::string& detail) {
    out.push_back({tag, pass, detail});
  };
  const Spectrum& n = art.n();
  const Spectrum m_pow = Spectrum::pow2(art.out_bit);

  // base normalization
  {
    bool ok = art.base.partial.at_cell(0) == art.base.kernel_norm &&
              art.base.kernel_norm >= eighth_variation(n) && !art.lambda.is_zero();
    push("base-normalization", ok,
         "S(g)(0) = " + art.base.kernel_norm.str() + " >= V/8 = " + eighth_variation(n).str());
  }

  // admissible sources and the vacant bit
  {
    bool ok = true;
    for (const auto& d : art.deltas) {
      const Spectrum& source = art.seq[d.source_index];
      if (d.source_index + 1 <= art.base.level) ok = false;
      Spectrum expect = source.nested_diff(n);
      if (d.branch == Branch::lower_cut) expect = expect.plus(m_pow);
      if (!(expect == d.delta)) ok = false;
    }
    for (const auto& term : art.seq)
      if (term.test_bit(art.out_bit)) ok = false;
    push("delta-admissible", ok, "every index from an admissible set; bit M vacant everywhere");
  }

  // spacing chain
  {
    bool ok = art.deltas.front().delta >= m_pow.plus(Spectrum::from_value(1));
    for (std::size_t j = 0; j + 1 < art.deltas.size(); ++j)
      if (!(art.deltas[j + 1].delta >= art.deltas[j].delta.plus(m_pow).shl(1))) ok = false;
    push("delta-spacing", ok, "delta_1 >= 2^M + 1 and delta_{j+1} >= 2(delta_j + 2^M)");
  }

  // branch bookkeeping: exactly one cut lands on a sequence term
  {
    bool ok = true;
    for (const auto& d : art.deltas) {
      const Spectrum& hit = d.branch == Branch::upper_cut ? d.upper_cut : d.lower_cut;
      const Spectrum& miss = d.branch == Branch::upper_cut ? d.lower_cut : d.upper_cut;
      if (!(hit == art.seq[d.source_index])) ok = false;
      if (std::binary_search(art.seq.begin(), art.seq.end(), miss)) ok = false;
    }
    push("branch-cut-alignment", ok, "designated cut on a term, the other cut off the sequence");
  }

  // degree chain: top bits of the deltas strictly increase, which bounds each
  // partial head's degree below the next modulation scale
  {
    bool ok = true;
    for (std::size_t j = 0; j + 1 < art.deltas.size(); ++j)
      if (!(art.deltas[j].delta.max_bit() + 1 <= art.deltas[j + 1].delta.max_bit())) ok = false;
    push("degree-chain", ok, "modulation top bits strictly increase");
  }

  // witness cap
  {
    bool ok = art.witness_cap >= art.degree;
    for (const auto& d : art.deltas)
      if (d.source_index > art.cap_index) ok = false;
    push("witness-cap", ok, "every designated term stays at or below the cap");
  }

  // range and coefficient structure on the dense form
  if (art.dense.has_value()) {
    const StepFn& q = *art.dense;
    int64_t max_val = 0, min_val = 0;
    for (int64_t v : q.num()) {
      max_val = std::max(max_val, v);
      min_val = std::min(min_val, v);
    }
    bool pow_ok = true;
    for (int64_t v : q.num())
      if (v != 0 && (v & (v - 1)) != 0) pow_ok = false;
    bool bound_ok = min_val >= 0 && q.log2_den() == 0 &&
                    Spectrum::from_value(static_cast<uint64_t>(max_val)) <=
                        Spectrum::pow2(int64_t{1} << art.base.resolution) &&
                    Spectrum::pow2(int64_t{1} << art.base.resolution) <=
                        Spectrum::pow2(n.shl(1).value_or_throw());
    push("range-bound", bound_ok && pow_ok,
         "0 <= Q <= 2^(2^N) <= 2^(2n), max = " + std::to_string(max_val));

    WalshCoeffs coeffs = fwht(q);
    bool unit = coeffs.at(0) == Rat64(1);
    push("unit-integral", unit, "constant coefficient is exactly 1");

    bool gap_ok = true;
    uint64_t first = art.deltas.front().delta.value_or_throw();
    for (uint64_t k = 1; k < std::min<uint64_t>(first, coeffs.num().size()); ++k)
      if (coeffs.num()[k] != 0) gap_ok = false;
    push("low-spectrum-empty", gap_ok, "no coefficients strictly between 0 and delta_1");

    bool deg_ok = Spectrum::from_value(coeffs.degree()) == art.degree;
    push("degree-exact", deg_ok, "transform degree matches the bookkeeping");

    // remainder localization, step by step on a running head
    {
      bool ok = true;
      const int full_res = art.dense_resolution;
      const uint64_t cells = uint64_t{1} << full_res;
      const auto& g = art.base.sign_grid.num();
      std::vector<int64_t> head(cells, 1);
      for (std::size_t j = 0; j < art.deltas.size(); ++j) {
        uint64_t mask = 0;
        for (int64_t e : art.deltas[j].delta.bits())
          mask |= uint64_t{1} << (full_res - 1 - e);
        if (j >= 1) {
          std::vector<int64_t> rem(cells);
          for (uint64_t cell = 0; cell < cells; ++cell) {
            int w = (std::popcount(cell & mask) & 1) ? -1 : 1;
            int64_t gv = g[(cell >> (full_res - art.base.resolution)) ^ j];
            rem[cell] = w * gv * (head[cell] - 1);
          }
          WalshCoeffs rc = fwht(StepFn::from_integers(full_res, std::move(rem)));
          uint64_t lo = art.deltas[j - 1].delta.plus(Spectrum::pow2(art.base.resolution))
                            .value_or_throw();
          uint64_t hi = art.deltas[j].delta.minus(m_pow).value_or_throw();
          for (uint64_t k = 0; k < rc.num().size(); ++k)
            if (rc.num()[k] != 0 && !(k > lo && k < hi)) ok = false;
        }
        for (uint64_t cell = 0; cell < cells; ++cell) {
          int w = (std::popcount(cell & mask) & 1) ? -1 : 1;
          int64_t gv = g[(cell >> (full_res - art.base.resolution)) ^ j];
          head[cell] *= 1 + w * gv;
        }
      }
      push("remainder-localization", ok,
           "each remainder's spectrum sits in (delta_{j-1} + 2^N, delta_j - 2^M)");
    }

    // partial sums stabilize past the degree
    {
      uint64_t deg = art.degree.value_or_throw();
      uint64_t cells = uint64_t{1} << art.dense_resolution;
      bool ok = true;
      if (deg + 1 < cells) {
        StepFn s = partial_sum(coeffs, Spectrum::from_value(deg + 1));
        ok = s == q;
      }
      push("stability-past-degree", ok, "cutting just past the degree returns the polynomial");
    }
  }

  // the two-cut gap on each step's home cell: there the translated partial
  // sum is the kernel norm, so the cuts differ by it exactly
  {
    std::mt19937_64 rng(seed);
    const int n_res = art.base.resolution;
    const int fine = static_cast<int>(art.deltas.back().delta.max_bit()) + 1 - n_res;
    bool gap_ok = true;
    for (uint64_t p = 0; p < sample_points; ++p) {
      std::size_t step = p % art.deltas.size();
      std::vector<uint8_t> bits(static_cast<std::size_t>(n_res + fine));
      for (int b = 0; b < n_res; ++b)
        bits[static_cast<std::size_t>(b)] = static_cast<uint8_t>((step >> (n_res - 1 - b)) & 1u);
      for (int b = 0; b < fine; ++b)
        bits[static_cast<std::size_t>(n_res + b)] = static_cast<uint8_t>(rng() & 1u);
      DyadicPoint x = DyadicPoint::from_bits(std::move(bits));
      CutPair pair = eval_cut(art, x, step);
      if (!(pair.gap.abs() == art.base.kernel_norm)) gap_ok = false;
      if (!(pair.gap.abs() >= eighth_variation(n))) gap_ok = false;
    }
    push("cut-gap", gap_ok, "the cut pair differs by the kernel norm >= V/8 on home cells");
  }

  // factored evaluation against the dense grid at unrestricted points
  if (art.dense.has_value()) {
    std::mt19937_64 rng(seed + 1);
    const int res = art.dense_resolution + 2;
    WalshCoeffs coeffs = fwht(*art.dense);
    bool agree_ok = true, head_ok = true;
    std::vector<StepFn> lows, highs;
    for (std::size_t step = 0; step < art.deltas.size(); ++step) {
      lows.push_back(partial_sum(coeffs, art.deltas[step].lower_cut));
      highs.push_back(partial_sum(coeffs, art.deltas[step].upper_cut));
    }
    for (uint64_t p = 0; p < sample_points; ++p) {
      DyadicPoint x = DyadicPoint::random(res, rng);
      for (std::size_t step = 0; step < art.deltas.size(); ++step) {
        CutPair pair = eval_cut(art, x, step);
        if (!(lows[step].at(x) == pair.lower.to_rat())) agree_ok = false;
        if (!(highs[step].at(x) == pair.upper.to_rat())) agree_ok = false;
      }
      CutValue prod = eval_product(art, x);
      if (!(art.dense->at(x) == prod.to_rat())) head_ok = false;
    }
    push("dense-pointwise-agreement", agree_ok,
         "factored cut values equal dense partial sums at every sample, every cut pair");
    push("product-pointwise-agreement", head_ok,
         "factored product values equal the dense grid at every sample");
  }

  return out;
}

} // namespace walshlab
