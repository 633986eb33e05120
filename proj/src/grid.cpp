#include "walshlab/grid.hpp"

#include <algorithm>
#include <bit>

#include "walshlab/error.hpp"

namespace walshlab {

namespace {

constexpr int kMaxResolution = 26;

void check_resolution(int n) {
  require(n >= 0 && n <= kMaxResolution, Errc::invalid_argument, "resolution out of range");
}

uint64_t bitrev(uint64_t j, int n) {
  uint64_t r = 0;
  for (int i = 0; i < n; ++i) {
    r = (r << 1) | (j & 1u);
    j >>= 1;
  }
  return r;
}

template <typename T>
void bitrev_permute(std::vector<T>& v, int n) {
  for (uint64_t j = 0; j < v.size(); ++j) {
    uint64_t r = bitrev(j, n);
    if (r > j) std::swap(v[j], v[r]);
  }
}

// In-place Hadamard butterfly: out[k] = sum_j (-1)^popcount(k & j) in[j].
template <typename T>
void hadamard(std::vector<T>& v) {
  const std::size_t n = v.size();
  for (std::size_t stride = 1; stride < n; stride <<= 1) {
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        T a = v[i];
        T b = v[i + stride];
        v[i] = a + b;
        v[i + stride] = a - b;
      }
    }
  }
}

// Walsh transform in Paley ordering: out[k] = sum_j w_k(cell j) * in[j].
// Self-inverse up to the factor 2^N.
template <typename T>
void walsh_paley(std::vector<T>& v, int resolution) {
  bitrev_permute(v, resolution);
  hadamard(v);
}

void check_transform_bounds(const std::vector<int64_t>& num, int resolution) {
  int64_t maxabs = 0;
  for (int64_t x : num) maxabs = std::max(maxabs, x < 0 ? -x : x);
  // butterflies run in 128-bit: outputs are signed sums of 2^N inputs
  require(resolution <= 56 && maxabs <= (int64_t{1} << 56), Errc::out_of_range,
          "values too large for exact transform");
}

// Runs the transform in 128-bit scratch, drops the common power of two into
// the denominator exponent, and narrows back with a range check. Values such
// as inverse-transform intermediates may exceed 64 bits mid-flight even when
// the normalized result fits.
std::pair<std::vector<int64_t>, int> walsh_paley_exact(const std::vector<int64_t>& num,
                                                       int resolution, int log2_den) {
  std::vector<__int128> wide(num.begin(), num.end());
  walsh_paley(wide, resolution);
  int shift = log2_den;
  for (__int128 x : wide) {
    if (x == 0) continue;
    unsigned __int128 a = x < 0 ? static_cast<unsigned __int128>(-x)
                                : static_cast<unsigned __int128>(x);
    int tz = 0;
    while (((a >> tz) & 1u) == 0 && tz < shift) ++tz;
    shift = std::min(shift, tz);
    if (shift == 0) break;
  }
  std::vector<int64_t> out(wide.size());
  bool all_zero = true;
  for (std::size_t i = 0; i < wide.size(); ++i) {
    __int128 v = wide[i] >> shift;
    require(v >= INT64_MIN && v <= INT64_MAX, Errc::out_of_range,
            "transform result exceeds the exact range");
    out[i] = static_cast<int64_t>(v);
    if (out[i] != 0) all_zero = false;
  }
  return {std::move(out), all_zero ? 0 : log2_den - shift};
}

} // namespace

void StepFn::normalize() {
  int shift = log2_den_;
  for (int64_t x : num_) {
    if (x == 0) continue;
    shift = std::min(shift, std::countr_zero(static_cast<uint64_t>(x < 0 ? -x : x)));
    if (shift == 0) break;
  }
  if (std::all_of(num_.begin(), num_.end(), [](int64_t x) { return x == 0; })) {
    log2_den_ = 0;
    return;
  }
  if (shift > 0) {
    for (int64_t& x : num_) x >>= shift;
    log2_den_ -= shift;
  }
}

StepFn StepFn::zeros(int resolution) {
  check_resolution(resolution);
  StepFn f;
  f.resolution_ = resolution;
  f.num_.assign(std::size_t{1} << resolution, 0);
  return f;
}

StepFn StepFn::constant(int resolution, int64_t value) {
  StepFn f = zeros(resolution);
  std::fill(f.num_.begin(), f.num_.end(), value);
  return f;
}

StepFn StepFn::from_integers(int resolution, std::vector<int64_t> values) {
  return from_dyadic(resolution, std::move(values), 0);
}

StepFn StepFn::from_dyadic(int resolution, std::vector<int64_t> num, int log2_den) {
  check_resolution(resolution);
  require(num.size() == (std::size_t{1} << resolution), Errc::invalid_argument,
          "value count must be 2^resolution");
  require(log2_den >= 0 && log2_den <= 62, Errc::invalid_argument, "bad denominator exponent");
  StepFn f;
  f.resolution_ = resolution;
  f.log2_den_ = log2_den;
  f.num_ = std::move(num);
  f.normalize();
  return f;
}

Rat64 StepFn::at_cell(uint64_t j) const {
  require(j < num_.size(), Errc::invalid_argument, "cell index out of range");
  return Rat64(num_[j], int64_t{1} << log2_den_);
}

void WalshCoeffs::normalize() {
  int shift = log2_den_;
  for (int64_t x : num_) {
    if (x == 0) continue;
    shift = std::min(shift, std::countr_zero(static_cast<uint64_t>(x < 0 ? -x : x)));
    if (shift == 0) break;
  }
  if (std::all_of(num_.begin(), num_.end(), [](int64_t x) { return x == 0; })) {
    log2_den_ = 0;
    return;
  }
  if (shift > 0) {
    for (int64_t& x : num_) x >>= shift;
    log2_den_ -= shift;
  }
}

WalshCoeffs WalshCoeffs::from_dyadic(int resolution, std::vector<int64_t> num, int log2_den) {
  check_resolution(resolution);
  require(num.size() == (std::size_t{1} << resolution), Errc::invalid_argument,
          "coefficient count must be 2^resolution");
  require(log2_den >= 0 && log2_den <= 62, Errc::invalid_argument, "bad denominator exponent");
  WalshCoeffs c;
  c.resolution_ = resolution;
  c.log2_den_ = log2_den;
  c.num_ = std::move(num);
  c.normalize();
  return c;
}

Rat64 WalshCoeffs::at(uint64_t k) const {
  require(k < num_.size(), Errc::invalid_argument, "coefficient index out of range");
  return Rat64(num_[k], int64_t{1} << log2_den_);
}

uint64_t WalshCoeffs::degree() const {
  for (std::size_t k = num_.size(); k-- > 0;)
    if (num_[k] != 0) return k;
  return 0;
}

WalshCoeffs fwht(const StepFn& f) {
  check_transform_bounds(f.num(), f.resolution());
  require(f.log2_den() + f.resolution() <= 62, Errc::out_of_range,
          "denominator exponent too large for exact transform");
  auto [num, log2_den] =
      walsh_paley_exact(f.num(), f.resolution(), f.log2_den() + f.resolution());
  return WalshCoeffs::from_dyadic(f.resolution(), std::move(num), log2_den);
}

StepFn fwht_inverse(const WalshCoeffs& c) {
  check_transform_bounds(c.num(), c.resolution());
  auto [num, log2_den] = walsh_paley_exact(c.num(), c.resolution(), c.log2_den());
  return StepFn::from_dyadic(c.resolution(), std::move(num), log2_den);
}

StepFn partial_sum(const WalshCoeffs& c, const Spectrum& m) {
  require(m <= Spectrum::pow2(c.resolution()), Errc::precondition_violation,
          "cut exceeds resolution");
  uint64_t cut = m.value_or_throw();
  std::vector<int64_t> num = c.num();
  std::fill(num.begin() + static_cast<std::ptrdiff_t>(cut), num.end(), int64_t{0});
  return fwht_inverse(WalshCoeffs::from_dyadic(c.resolution(), std::move(num), c.log2_den()));
}

StepFn dirichlet_dense(const Spectrum& n, int resolution) {
  check_resolution(resolution);
  require(n <= Spectrum::pow2(resolution), Errc::precondition_violation,
          "kernel order exceeds resolution");
  const std::size_t cells = std::size_t{1} << resolution;
  std::vector<int64_t> vals(cells, 0);
  // D_n = sum over set bits e (descending) of [prod of earlier r_e] * D_{2^e},
  // and D_{2^e} is 2^e on [0, 2^-e), zero elsewhere.
  for (uint64_t j = 0; j < cells; ++j) {
    int64_t acc = 0;
    int sign = 1;
    for (auto it = n.bits().rbegin(); it != n.bits().rend(); ++it) {
      int64_t e = *it;
      if (j < (uint64_t{1} << (resolution - e))) acc += sign * (int64_t{1} << e);
      // r_e at the cell anchor reads fractional bit e+1 = bit (resolution-1-e) of j;
      // bits past the grid are zero (only reachable for e = resolution, the last term)
      if (e < resolution && ((j >> (resolution - 1 - e)) & 1u)) sign = -sign;
    }
    vals[j] = acc;
  }
  return StepFn::from_integers(resolution, std::move(vals));
}

Rat64 l1_norm(const StepFn& f) {
  __int128 sum = 0;
  for (int64_t x : f.num()) sum += x < 0 ? -static_cast<__int128>(x) : static_cast<__int128>(x);
  return Rat64::from_int128(sum, static_cast<__int128>(1) << (f.resolution() + f.log2_den()));
}

StepFn sign_function(const StepFn& f) {
  std::vector<int64_t> s(f.cells());
  for (std::size_t j = 0; j < s.size(); ++j) {
    int64_t x = f.num()[j];
    s[j] = x > 0 ? 1 : (x < 0 ? -1 : 0);
  }
  return StepFn::from_integers(f.resolution(), std::move(s));
}

int walsh_sign_on_cell(uint64_t k, uint64_t j, int resolution) {
  check_resolution(resolution);
  require(k < (uint64_t{1} << resolution) && j < (uint64_t{1} << resolution),
          Errc::invalid_argument, "index out of range");
  return (std::popcount(k & bitrev(j, resolution)) & 1) ? -1 : 1;
}

WalshCoeffsF fwht(const StepFnF& f) {
  check_resolution(f.resolution);
  require(f.v.size() == (std::size_t{1} << f.resolution), Errc::invalid_argument, "bad size");
  WalshCoeffsF c{f.resolution, f.v};
  walsh_paley(c.v, c.resolution);
  const double scale = std::ldexp(1.0, -f.resolution);
  for (double& x : c.v) x *= scale;
  return c;
}

StepFnF fwht_inverse(const WalshCoeffsF& c) {
  check_resolution(c.resolution);
  require(c.v.size() == (std::size_t{1} << c.resolution), Errc::invalid_argument, "bad size");
  StepFnF f{c.resolution, c.v};
  walsh_paley(f.v, f.resolution);
  return f;
}

double l1_norm(const StepFnF& f) {
  double sum = 0.0;
  for (double x : f.v) sum += x < 0 ? -x : x;
  return std::ldexp(sum, -f.resolution);
}

std::vector<KernelRow> kernel_table(uint64_t n_max, int resolution) {
  check_resolution(resolution);
  require(n_max >= 1 && n_max <= (uint64_t{1} << resolution), Errc::invalid_argument,
          "n_max exceeds resolution");
  const std::size_t cells = std::size_t{1} << resolution;
  std::vector<uint64_t> rev(cells);
  for (uint64_t j = 0; j < cells; ++j) rev[j] = bitrev(j, resolution);

  std::vector<KernelRow> rows;
  rows.reserve(n_max);
  std::vector<int64_t> kernel(cells, 0); // D_0 = 0
  for (uint64_t n = 1; n <= n_max; ++n) {
    const uint64_t k = n - 1; // add w_{n-1}
    __int128 abs_sum = 0;
    for (uint64_t j = 0; j < cells; ++j) {
      kernel[j] += (std::popcount(k & rev[j]) & 1) ? -1 : 1;
      abs_sum += kernel[j] < 0 ? -kernel[j] : kernel[j];
    }
    KernelRow row;
    row.n = n;
    row.variation = Spectrum::from_value(n).variation();
    row.norm = Rat64::from_int128(abs_sum, static_cast<__int128>(1) << resolution);
    row.lower_ok = Rat64(static_cast<int64_t>(row.variation), 8) <= row.norm;
    row.upper_ok = row.norm <= Rat64(static_cast<int64_t>(row.variation));
    rows.push_back(row);
  }
  return rows;
}

} // namespace walshlab
