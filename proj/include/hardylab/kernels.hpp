#pragma once

// Poisson-type kernel R_r^alpha(u, v) = sum_k r^k phi_k(u) phi_k(v), its
// Bessel closed form, and the L^2 smoothness ratios it is checked against.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hardylab/bases.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab {

class KernelParams {
 public:
  KernelParams(Alpha alpha, double r);
  KernelParams(double alpha, double r) : KernelParams(Alpha{alpha}, r) {}

  const Alpha& alpha() const { return alpha_; }
  double alpha1() const { return alpha_[0]; }  // one-dimensional parameter
  double r() const { return r_; }

 private:
  Alpha alpha_;
  double r_;
};

/// ln R_r^alpha(u, v) for d = 1.
double log_kernel_closed(const KernelParams& p, double u, double v);

/// R_r^alpha(u, v) for d = 1; values below 1e-300 are returned as 0.
double kernel_closed(const KernelParams& p, double u, double v);

/// Tensor product of the one-dimensional kernels.
double kernel_closed_tensor(const KernelParams& p, std::span<const double> x, std::span<const double> y);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on sum_{k > N} |r^k phi_k(u) phi_k(v)|
  int terms = 0;            // N
};

/// Truncated series sum_{k <= N} r^k phi_k(u) phi_k(v) with an envelope
/// based bound on the discarded tail (alpha >= -1/2).
SeriesValue kernel_series(const KernelParams& p, double u, double v, int n_max);

/// Bound on the series tail beyond N.
double kernel_series_tail(const KernelParams& p, double u, double v, int n_max);

/// Smallest N (on a 1.25x geometric ladder) whose tail bound is <= tol.
SeriesValue kernel_series_auto(const KernelParams& p, double u, double v, double tol);

/// R_r(u, .) as a function of the second variable.
Function1D kernel_section(const KernelParams& p, double u);

/// ||R_r(u, .) - R_r(u', .)||_{L^2(R_+)}.
QuadResult kernel_diff_l2(const KernelParams& p, double u, double u_prime, const QuadSpec& spec = {});

/// ||R_r(u, .)||_{L^2(R_+)}.
QuadResult kernel_l2(const KernelParams& p, double u, const QuadSpec& spec = {});

/// int_0^inf R_r(u, v) phi_k(v) dv.
QuadResult kernel_apply_basis(const KernelParams& p, int k, double u, const QuadSpec& spec = {});

/// int_0^inf R_r(u, w) R_s(w, v) dw.
QuadResult kernel_compose(double alpha, double r, double s, double u, double v, const QuadSpec& spec = {});

// --- bound ratios ------------------------------------------------------------

/// ||R_r(u,.) - R_r(u',.)|| / (|u-u'| (1-r)^{-3/4} + |u-u'|^{alpha+1/2} (1-r)^{-(alpha+1)/2}).
double kernel_difference_ratio(double alpha, double r, double u, double u_prime);

/// |phi_k(u) - phi_k(v)| / (|u-v| (k+1)^{-1/4} + |u-v|^{alpha+1/2} (k+1)^{alpha/2}).
double basis_difference_ratio(int k, double alpha, double u, double v);

/// ||u^{-1} R_r(u,.)|| / ((1-r)^{-3/4} + u^{alpha-1/2} (1-r)^{-(alpha+1)/2}).
double kernel_weighted_norm_ratio(double alpha, double r, double u);

// --- sweeps --------------------------------------------------------------------

/// Least-squares slope of log y against log x with a 95% half-width.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // infinite when fewer than 3 points
  std::size_t points = 0;
};
SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// One evaluated grid point of a sweep.
struct SweepSample {
  std::vector<double> params;  // named by BoundCheckReport::param_names
  double ratio = 0.0;
};

struct BoundCheckReport {
  std::string name;
  std::string grid_version;
  std::vector<std::string> param_names;
  double max_ratio = 0.0;
  std::vector<double> arg_max;
  std::size_t samples = 0;
  double fitted_constant = 0.0;  // empirical implied constant (= max_ratio)
  std::string driver;            // parameter the boundedness slope is taken against
  std::vector<double> driver_values;
  std::vector<double> driver_max_ratio;  // max ratio per driver value
  SlopeFit slope;
  /// Slopes against other parameters, reported for information.
  std::vector<std::pair<std::string, SlopeFit>> extra_slopes;
  std::vector<SweepSample> rows;

  /// Boundedness surrogate: slope of max_ratio against the driver <= limit.
  bool bounded(double limit = 0.05) const { return slope.slope <= limit; }
};

/// Versioned sweep grids.
struct KernelDifferenceGrid {
  static constexpr const char* kVersion = "kernel-difference-v1";
  std::vector<double> r = {0.5, 0.9, 0.99, 0.999};
  std::vector<double> u = {0.05, 0.5, 1.0, 3.0};
  std::vector<double> gap = {1e-3, 1e-2, 0.1};
};
struct BasisDifferenceGrid {
  static constexpr const char* kVersion = "basis-difference-v1";
  std::vector<int> k = {1, 2, 4, 8, 16, 32, 64, 128, 256, 500};
  int random_pairs = 400;
  std::uint64_t seed = 20240601;
};
struct KernelWeightedNormGrid {
  static constexpr const char* kVersion = "kernel-weighted-norm-v1";
  std::vector<double> r = {0.6, 0.9, 0.99, 0.999};
  std::vector<double> u = {0.01, 0.1, 1.0, 5.0};
};

/// Sweep over (r, u, u' = u + gap); driver (1-r)^{-1}, extra slope
/// against |u-u'|^{-1}.
BoundCheckReport kernel_difference_sweep(double alpha, const KernelDifferenceGrid& grid = {});
/// Sweep over k and (u, v) pairs in (0,1); driver |u-v|^{-1} binned by
/// decade, extra slope against k+1.
BoundCheckReport basis_difference_sweep(double alpha, const BasisDifferenceGrid& grid = {});
/// Sweep over (r, u); driver (1-r)^{-1}.
BoundCheckReport kernel_weighted_norm_sweep(double alpha, const KernelWeightedNormGrid& grid = {});

}  // namespace hardylab
