#ifndef WALSHLAB_LEMMA1_HPP
#define WALSHLAB_LEMMA1_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walshlab/dyadic_point.hpp"
#include "walshlab/grid.hpp"
#include "walshlab/rational.hpp"
#include "walshlab/spectrum.hpp"

namespace walshlab {

/// Which of the two admissible index sets a modulation index was drawn from.
/// An upper_cut choice places delta + n_level on a sequence term, a lower_cut
/// choice places delta - lambda there.
enum class Branch : uint8_t { upper_cut, lower_cut };

inline char branch_code(Branch b) { return b == Branch::upper_cut ? 'A' : 'B'; }

/// One selected modulation index delta_j together with the exact measure data
/// that drove the branch decision on its home cell.
struct DeltaChoice {
  Spectrum delta;
  Branch branch;
  std::size_t source_index = 0; // 0-based index into the sequence prefix
  Spectrum lower_cut;           // delta - lambda
  Spectrum upper_cut;           // delta + n_level
  uint64_t active_count = 0;    // a_j: factors with a nonzero base value on the cell
  bool cond_sum = false;        // |R* + S(g_j)| >= V/16 on at least half the cell
  bool cond_rem = false;        // |R*| >= V/16 on at least half the cell
  bool fracs_exact = false;     // the two fractions below are populated
  Rat64 frac_sum;               // exact measure fraction behind cond_sum
  Rat64 frac_rem;               // exact measure fraction behind cond_rem
};

/// g = sgn(D_{n_level}) with its partial sum at n_level and the kernel norm.
struct Lemma1Base {
  std::size_t level = 0; // 1-based position in the sequence
  Spectrum n_level;
  int resolution = 0;    // N = max Sp(n_level) + 1
  StepFn sign_grid;      // g on the 2^N grid
  StepFn partial;        // S_{n_level}(g) on the 2^N grid
  Rat64 kernel_norm;     // ||D_{n_level}||_1 = S_{n_level}(g)(0)
};

struct Lemma1Artifact {
  std::vector<Spectrum> seq; // the scanned prefix the construction used
  Lemma1Base base;
  int64_t out_bit = 0; // M: minimal bit >= N absent from every spectrum
  Spectrum lambda;     // 2^M - n_level
  std::vector<DeltaChoice> deltas; // 2^N entries
  Spectrum degree;                 // exact degree of the product polynomial
  Spectrum witness_cap;            // min{n_t >= degree}
  std::size_t cap_index = 0;       // its 0-based position
  std::optional<StepFn> dense;     // materialized product, when the degree fits
  int dense_resolution = 0;

  uint64_t factor_count() const { return uint64_t{1} << base.resolution; }
  const Spectrum& n() const { return base.n_level; }
  uint64_t variation() const { return base.n_level.variation(); }
  Rat64 witness_threshold() const { return Rat64(static_cast<int64_t>(variation()), 16); }
  /// The cut whose partial sum the branch pinned to a sequence term.
  const Spectrum& designated_cut(std::size_t step) const {
    const DeltaChoice& d = deltas[step];
    return d.branch == Branch::upper_cut ? d.upper_cut : d.lower_cut;
  }
};

struct Lemma1Config {
  int dense_resolution_cap = 22; // materialize the product up to 2^22 cells
  uint64_t max_factors = uint64_t{1} << 11; // refuse 2^N beyond this
};

/// g = sgn(D_{n_v}) at resolution N = max Sp(n_v) + 1, with the exactness
/// checks the construction rests on: S_{n_v}(g)(0) equals the kernel norm and
/// is at least V/8, and S_{n_v}(g) is constant on the first cell.
Lemma1Base build_base(const std::vector<Spectrum>& seq, std::size_t level);

/// Minimal M >= resolution that no term's spectrum contains. Certified from
/// the nested structure: any vacant bit below max Sp of the last scanned term
/// stays vacant in every later term. Errors when no such bit is scannable.
int64_t minimal_out_of_spectrum(const std::vector<Spectrum>& seq, int resolution);

/// Sequentially selects delta_1 < ... < delta_{2^N} from the two admissible
/// sets, testing the branch measure conditions exactly. The conditions factor
/// over the sign patterns of the already-chosen modulations, whose characters
/// are independent on each cell, so each test is O(j) instead of a grid scan.
std::vector<DeltaChoice> select_deltas(const std::vector<Spectrum>& seq, const Lemma1Base& base,
                                       int64_t out_bit);

/// Completes the artifact: degree bookkeeping, the witness cut cap, and the
/// dense materialization when the degree fits under the resolution cap.
Lemma1Artifact assemble_artifact(const std::vector<Spectrum>& seq, Lemma1Base base,
                                 int64_t out_bit, std::vector<DeltaChoice> deltas,
                                 const Lemma1Config& config = {});

/// build_base + minimal_out_of_spectrum + select_deltas + assemble_artifact.
Lemma1Artifact build_lemma1(const std::vector<Spectrum>& seq, std::size_t level,
                            const Lemma1Config& config = {});

/// Exact value of a partial sum of the product polynomial at one point,
/// kept in the split form value = head_scale * 2^head_log2 + rest so it stays
/// exact even when the head is astronomically large.
struct CutValue {
  int head_scale = 0;    // 0, 1 or 2
  int64_t head_log2 = 0; // head = head_scale * 2^head_log2 (0 when scale is 0)
  Rat64 rest;

  bool head_zero() const { return head_scale == 0; }
  bool abs_at_least(const Rat64& threshold) const;
  Rat64 to_rat() const; // errors when the head exceeds the exact range
  double approx() const;
};

struct CutPair {
  CutValue lower; // S_{delta_j - lambda}
  CutValue upper; // S_{delta_j + n_level}
  Rat64 gap;      // upper - lower = (+/-) S_{n_level}(g_j)(x), exactly
};

/// Pointwise evaluation of both cuts around step j (0-based), valid at every
/// level regardless of whether the dense form exists. Cost is O(j * |Sp|).
CutPair eval_cut(const Lemma1Artifact& artifact, const DyadicPoint& x, std::size_t step);

/// Full value of the product polynomial at a point (head over all factors).
CutValue eval_product(const Lemma1Artifact& artifact, const DyadicPoint& x);

struct CellCoverage {
  uint64_t cell = 0;  // coarse cell index (0-based)
  uint64_t hits = 0;  // points whose designated-cut maximum clears V/16
  uint64_t total = 0; // points examined in the cell
  Rat64 fraction;     // hits / total (exact measure on the dense path)
};

struct ExtractionReport {
  bool exact = false; // dense enumeration vs sampling
  Rat64 threshold;    // V/16
  std::vector<CellCoverage> cells;
  bool all_cells_quarter = false;  // every coverage fraction >= 1/4
  uint64_t max_witness_source = 0; // largest k(v, x) seen (0-based)
  bool witness_cap_ok = false;     // every witness term stays under the cap
  uint64_t points = 0;
};

/// The set where some designated cut's magnitude reaches V/16, reported per
/// coarse cell. Dense artifacts are enumerated exactly; otherwise points are
/// sampled per cell with the seeded generator.
ExtractionReport extract_set(const Lemma1Artifact& artifact, uint64_t samples_per_cell = 128,
                             uint64_t seed = 0);

struct Verdict {
  std::string tag;
  bool pass = false;
  std::string detail;
};

/// The full assertion battery over a constructed artifact; every row must
/// pass for a sound construction.
std::vector<Verdict> verify_artifact(const Lemma1Artifact& artifact, uint64_t seed = 0,
                                     uint64_t sample_points = 1000);

} // namespace walshlab

#endif
