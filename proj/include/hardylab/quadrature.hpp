#pragma once

// Composite Gauss-Legendre quadrature on (0, inf), R and their products,
// with inner products against the orthonormal systems.

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "hardylab/bases.hpp"

namespace hardylab {

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  double truncation_radius = 0.0;  // 0: derived from decay metadata
  int panel_order = 32;
  int max_depth = 60;  // bisections allowed below an initial panel

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // includes tail_bound
  double tail_bound = 0.0;      // mass beyond the truncation radius
  bool converged = true;
  std::size_t evaluations = 0;
};

/// A real function of one variable plus what quadrature needs to know about it.
struct Function1D {
  std::function<double(double)> eval;
  /// |g(u)| <~ exp(-decay_rate u^2) for large |u|; 0 when no Gaussian decay.
  double decay_rate = 0.0;
  /// g vanishes outside [support_lo, support_hi].
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
  /// Integrable singularities or kinks; panels are graded geometrically toward them.
  std::vector<double> singular_points;
  /// Jump discontinuities; used as panel boundaries.
  std::vector<double> jumps;
  /// Width of the initial uniform panels.
  double length_scale = 1.0;

  double operator()(double u) const { return eval(u); }
};

/// Product function f(x) = prod_i factors[i](x_i).
struct SeparableFunction {
  std::vector<Function1D> factors;
  double operator()(std::span<const double> x) const;
};

/// Non-separable function on R^d_+ with a common Gaussian decay rate.
struct FunctionNdInfo {
  FunctionNd eval;
  std::size_t dim = 1;
  double decay_rate = 0.0;
  double support_hi = std::numeric_limits<double>::infinity();  // per coordinate
};

/// phi_k^alpha as a Function1D, effectively supported on (0, sqrt(2 nu) + 8].
Function1D basis_function(int k, double alpha);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Adaptive composite Gauss-Legendre on [a, b] (finite).
QuadResult integrate_interval(const std::function<double(double)>& g, double a, double b,
                              const QuadSpec& spec, std::span<const double> breakpoints = {});

/// Integral over (0, inf) with geometric refinement toward 0.
QuadResult integrate_halfline(const Function1D& g, const QuadSpec& spec = {});

/// Integral over R, split at 0.
QuadResult integrate_line(const Function1D& g, const QuadSpec& spec = {});

/// <f, phi_k^alpha>_+ for one k.
QuadResult inner_product_plus(const Function1D& f, int k, double alpha, const QuadSpec& spec = {});

/// <f, phi_n^alpha>_+ on R^d_+ for a product function (Fubini).
QuadResult inner_product_plus(const SeparableFunction& f, const MultiIndex& n, const Alpha& alpha,
                              const QuadSpec& spec = {});

/// <f, phi_n^alpha>_+ on R^d_+ by a tensor-product panel rule (d <= 4).
QuadResult inner_product_plus(const FunctionNdInfo& f, const MultiIndex& n, const Alpha& alpha,
                              const QuadSpec& spec = {});

/// <f, h_n^lambda> on R, integrating f h_n directly over both half-lines.
QuadResult inner_product_line(const Function1D& f, int n, double lambda, const QuadSpec& spec = {});

QuadResult l2_norm_halfline(const Function1D& g, const QuadSpec& spec = {});
QuadResult l2_diff_norm(const Function1D& g1, const Function1D& g2, const QuadSpec& spec = {});

/// All coefficients k = 0..kmax at once.
struct Projection {
  std::vector<double> coefficients;
  std::vector<double> errors;
  bool converged = true;
};

/// <f, phi_k^alpha>_+ for k = 0..kmax on one composite rule.
Projection project_halfline(const Function1D& f, double alpha, int kmax, const QuadSpec& spec = {});

/// <f, h_n^lambda> for n = 0..nmax on one composite rule.
Projection project_line(const Function1D& f, double lambda, int nmax, const QuadSpec& spec = {});

/// max_{j,k <= kmax} |<phi_j, phi_k>_+ - delta_jk|.
struct OrthonormalityReport {
  double max_defect = 0.0;
  int worst_j = 0;
  int worst_k = 0;
};
OrthonormalityReport orthonormality_defect(double alpha, int kmax, const QuadSpec& spec = {});

}  // namespace hardylab
