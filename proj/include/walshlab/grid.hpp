#ifndef WALSHLAB_GRID_HPP
#define WALSHLAB_GRID_HPP

#include <cstdint>
#include <vector>

#include "walshlab/dyadic_point.hpp"
#include "walshlab/rational.hpp"
#include "walshlab/spectrum.hpp"

namespace walshlab {

class StepFn;
class WalshCoeffs;

/// Forward transform: c[k] = 2^-N sum_j f(cell j) w_k(cell j). Exact.
WalshCoeffs fwht(const StepFn& f);
/// Inverse: f(cell j) = sum_k c[k] w_k(cell j). Exact; fwht_inverse(fwht(f)) == f.
StepFn fwht_inverse(const WalshCoeffs& c);
/// Partial sum S_m: zero all coefficients at indices >= m, then invert.
/// Requires m <= 2^resolution.
StepFn partial_sum(const WalshCoeffs& c, const Spectrum& m);

/// Function constant on the 2^N dyadic cells of [0,1), with exact
/// dyadic-rational values: cell j holds num[j] / 2^log2_den. Integer-valued
/// grids have log2_den = 0. Representations are normalized (no common factor
/// of 2 between all numerators and the denominator).
class StepFn {
public:
  StepFn() = default;
  static StepFn zeros(int resolution);
  static StepFn constant(int resolution, int64_t value);
  static StepFn from_integers(int resolution, std::vector<int64_t> values);
  static StepFn from_dyadic(int resolution, std::vector<int64_t> num, int log2_den);

  int resolution() const { return resolution_; }
  int log2_den() const { return log2_den_; }
  std::size_t cells() const { return num_.size(); }
  const std::vector<int64_t>& num() const { return num_; }

  bool is_integral() const { return log2_den_ == 0; }
  Rat64 at_cell(uint64_t j) const;
  Rat64 at(const DyadicPoint& x) const { return at_cell(x.cell_index(resolution_)); }

  bool operator==(const StepFn& other) const = default;

private:
  int resolution_ = 0;
  int log2_den_ = 0;
  std::vector<int64_t> num_; // length 2^resolution
  void normalize();
};

/// Walsh coefficient vector at resolution N: entry k is f_hat(k), stored as
/// num[k] / 2^log2_den. Bijective with StepFn via the transform below.
class WalshCoeffs {
public:
  WalshCoeffs() = default;
  static WalshCoeffs from_dyadic(int resolution, std::vector<int64_t> num, int log2_den);

  int resolution() const { return resolution_; }
  int log2_den() const { return log2_den_; }
  const std::vector<int64_t>& num() const { return num_; }
  Rat64 at(uint64_t k) const;
  /// Largest k with nonzero coefficient; 0 for the zero vector.
  uint64_t degree() const;

  bool operator==(const WalshCoeffs& other) const = default;

private:
  int resolution_ = 0;
  int log2_den_ = 0;
  std::vector<int64_t> num_;
  void normalize();
};

/// Dirichlet kernel D_n = sum_{k<n} w_k on the 2^N grid; requires n <= 2^N.
StepFn dirichlet_dense(const Spectrum& n, int resolution);

/// Integral of |f|: 2^-N sum |values|.
Rat64 l1_norm(const StepFn& f);

/// Cellwise sign in {-1, 0, +1}.
StepFn sign_function(const StepFn& f);

/// w_k at the anchor of cell j, for k < 2^N.
int walsh_sign_on_cell(uint64_t k, uint64_t j, int resolution);

/// Float path, for data that is not exactly dyadic.
struct StepFnF {
  int resolution = 0;
  std::vector<double> v;
};
struct WalshCoeffsF {
  int resolution = 0;
  std::vector<double> v;
};
WalshCoeffsF fwht(const StepFnF& f);
StepFnF fwht_inverse(const WalshCoeffsF& c);
double l1_norm(const StepFnF& f);

/// One row of the kernel norm table.
struct KernelRow {
  uint64_t n = 0;
  uint64_t variation = 0;
  Rat64 norm;     // ||D_n||_1
  bool lower_ok = false; // V(n)/8 <= norm
  bool upper_ok = false; // norm <= V(n)
};

/// Exact ||D_n||_1 with the V(n)/8 and V(n) bounds for n = 1..n_max,
/// computed incrementally on the 2^resolution grid. Requires n_max <= 2^resolution.
std::vector<KernelRow> kernel_table(uint64_t n_max, int resolution);

} // namespace walshlab

#endif
