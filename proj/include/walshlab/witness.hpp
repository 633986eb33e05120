#ifndef WALSHLAB_WITNESS_HPP
#define WALSHLAB_WITNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "walshlab/lemma1.hpp"
#include "walshlab/piecewise_convex.hpp"
#include "walshlab/spectrum.hpp"

namespace walshlab {

/// One planned level of the truncated divergence witness.
struct PlanLevel {
  int position = 0;       // 1-based slot j
  Rat64 weight_num;       // M_j (the planner uses M_j = j)
  std::size_t level = 0;  // 1-based index v(j) into the sequence
  Spectrum n_level;
  uint64_t variation = 0;
  bool term_ok = false;   // M_j phi(2^(2n)) / (2^(2n) V) <= 2^-j, verified exactly
  double term_approx = 0.0;

  /// Degree bookkeeping for the level's construction.
  bool cap_exact = false; // full selection ran inside the prefix
  Spectrum degree;        // exact degree, or a certified lower bound past the prefix
  Spectrum cap;           // min sequence term >= degree (when cap_exact)
  std::size_t cap_index = 0;

  /// Two sequence terms strictly between the cap and the next level.
  bool has_gap = false;
  std::size_t alpha_index = 0;
  std::size_t beta_index = 0;

  Rat64 weight() const { return weight_num / Rat64(static_cast<int64_t>(variation)); }
  /// The desk-scale divergence bound (M_j/V)(V/16 - 1); may be negative.
  Rat64 level_bound() const {
    return weight() * (Rat64(static_cast<int64_t>(variation), 16) - Rat64(1));
  }
};

struct WitnessPlan {
  std::vector<Spectrum> seq;
  std::vector<PlanLevel> levels;
};

/// Greedy level plan: weights M_j = j, each level v(j) minimal with the
/// exponent-coded budget term under 2^-j, the next level placed past the
/// previous level's cap with two spare terms designated in between.
/// Requires numeric evidence that phi vanishes against the sequence growth.
WitnessPlan plan_levels(const std::vector<Spectrum>& seq, const PiecewiseConvex& phi,
                        int truncation);

struct WitnessConfig {
  uint64_t samples = 10000;
  uint64_t seed = 0;
  uint64_t artifact_max_factors = uint64_t{1} << 11;
  Lemma1Config lemma1;
};

/// One point's evaluation of the truncated witness along its designated cuts.
struct WitnessEvaluation {
  struct CutRow {
    std::size_t position = 0; // plan slot
    std::size_t step = 0;     // 0-based factor step within the level
    Spectrum cut;             // the partial-sum index (a sequence term)
    Rat64 value;              // S_cut(f*)(x), exact when flagged
    bool exact = false;
    double approx = 0.0;
  };
  std::vector<CutRow> rows;

  Rat64 sup;           // max |S_cut| over evaluated designated cuts
  bool sup_exact = false;
  double sup_approx = 0.0;
  std::size_t arg_position = 0; // plan slot providing the maximum
  std::size_t arg_step = 0;
  bool clears_some_level_bound = false;
  Rat64 top_level_floor;          // weight * (V/16) - sum of later weights
  bool clears_top_level_floor = false;
  std::vector<Rat64> flat_defects; // S_{n_beta} - S_{n_alpha} per checked gap
};

struct WitnessSummary {
  uint64_t points = 0;
  uint64_t bound_hits = 0;      // clears_some_level_bound
  uint64_t floor_hits = 0;      // clears_top_level_floor
  uint64_t flat_zero_points = 0;
  std::vector<Rat64> level_bounds;
};

/// Evaluates the truncated witness sum of weighted constructions over the
/// planned levels. Artifacts are built for every level whose factor count
/// fits the configured limit; the remaining levels contribute exactly their
/// unit constant at every evaluated cut, certified through the plan's
/// spectral gaps.
class WitnessLab {
public:
  WitnessLab(WitnessPlan plan, const WitnessConfig& config = {});

  const WitnessPlan& plan() const { return plan_; }
  const std::map<std::size_t, Lemma1Artifact>& artifacts() const { return artifacts_; }
  const WitnessConfig& config() const { return config_; }

  WitnessEvaluation evaluate(const DyadicPoint& x) const;
  /// Deterministic sampling at the configured seed.
  WitnessSummary run() const;
  DyadicPoint sample_point(std::mt19937_64& rng) const;
  int sample_resolution() const { return sample_resolution_; }

private:
  WitnessPlan plan_;
  WitnessConfig config_;
  std::map<std::size_t, Lemma1Artifact> artifacts_; // by plan position
  int sample_resolution_ = 0;
};

/// Small Walsh polynomial by its nonzero coefficients.
struct SparsePoly {
  std::vector<std::pair<Spectrum, Rat64>> terms; // strictly increasing indices
  Spectrum degree() const;
  Rat64 eval(const DyadicPoint& x) const;
  static SparsePoly random(uint64_t max_degree, std::size_t max_terms, std::mt19937_64& rng);
};

struct RelocationResult {
  std::size_t gap_position = 0; // plan slot whose gap hosts the window
  Spectrum shift;               // n_beta - n_alpha
  SparsePoly relocated;
  bool window_ok = false;            // spectrum inside (n_alpha, n_beta]
  bool vanishes_below_anchor = false; // cut at n_alpha is identically zero
  bool full_at_window_top = false;    // cut at n_beta already holds everything
  bool index_addition_ok = false;     // shift xor h == shift + h throughout
  bool modulus_preserved = false;     // |relocated| == |original| at samples
};

/// Modulates a low-degree polynomial into a plan gap: indices move by
/// n_beta - n_alpha, which is disjoint from every index below the anchor.
/// Picks the first gap whose anchor strictly exceeds the degree.
RelocationResult spectral_relocate(const SparsePoly& poly, const WitnessPlan& plan,
                                   uint64_t seed = 0, uint64_t sample_points = 200);

} // namespace walshlab

#endif
