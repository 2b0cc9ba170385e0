#include "hardylab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardylab/errors.hpp"
#include "hardylab/specfun.hpp"

namespace hardylab {

namespace {

// Tolerances tight enough for difference norms of size ~1e-4.
QuadSpec tight(const QuadSpec& spec) {
  QuadSpec s = spec;
  s.abs_tol = std::min(spec.abs_tol, 1e-14);
  s.rel_tol = std::min(spec.rel_tol, 1e-11);
  return s;
}

// Centre and Gaussian rate of v -> R_r(u, v).
double section_center(double r, double u) { return 2.0 * std::sqrt(r) * u / (1.0 + r); }
double section_rate(double r) { return 0.5 * (1.0 + r) / (1.0 - r); }

}  // namespace

KernelParams::KernelParams(Alpha alpha, double r) : alpha_(std::move(alpha)), r_(r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("KernelParams: r must lie in (0, 1)");
}

double log_kernel_closed(const KernelParams& p, double u, double v) {
  if (!(u > 0.0 && v > 0.0)) throw DomainError("kernel_closed: u and v must be positive");
  const double r = p.r();
  const double a = p.alpha1();
  const double one_minus_r = 1.0 - r;
  const double sr = std::sqrt(r);
  const double z = 2.0 * sr * u * v / one_minus_r;
  // -(1+r)(u^2+v^2)/(2(1-r)) + z, rearranged without cancellation.
  const double d = u - v;
  const double quad = -(1.0 + r) * d * d / (2.0 * one_minus_r) -
                      u * v * one_minus_r / ((1.0 + sr) * (1.0 + sr));
  return std::numbers::ln2 + 0.5 * std::log(u * v) - std::log(one_minus_r) - 0.5 * a * std::log(r) +
         quad + (log_bessel_i(a, z) - z);
}

double kernel_closed(const KernelParams& p, double u, double v) {
  const double value = std::exp(log_kernel_closed(p, u, v));
  return value < 1e-300 ? 0.0 : value;
}

double kernel_closed_tensor(const KernelParams& p, std::span<const double> x, std::span<const double> y) {
  const std::size_t d = p.alpha().dim();
  if (x.size() != d || y.size() != d) throw ContractError("kernel_closed_tensor: dimension mismatch");
  double log_sum = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    log_sum += log_kernel_closed(KernelParams(p.alpha()[i], p.r()), x[i], y[i]);
  const double value = std::exp(log_sum);
  return value < 1e-300 ? 0.0 : value;
}

double kernel_series_tail(const KernelParams& p, double u, double v, int n_max) {
  const double a = p.alpha1();
  if (a < -0.5) throw DomainError("kernel_series: tail bound needs alpha >= -1/2");
  const EnvelopeFit fit = fit_envelope(a);
  // Safety factor 2 on the constant fitted over k <= 200.
  const double c = 2.0 * fit.constant;
  const double r = p.r();
  const int extra = static_cast<int>(std::min(20000.0, std::ceil(40.0 / -std::log(r))));
  const int k_stop = n_max + std::max(extra, 50);
  double sum = 0.0;
  double rk = std::pow(r, n_max + 1);
  for (int k = n_max + 1; k <= k_stop; ++k) {
    sum += rk * envelope(k, a, u, fit.gamma_decay) * envelope(k, a, v, fit.gamma_decay);
    rk *= r;
  }
  const double g = envelope_global_bound(fit.gamma_decay);
  return c * c * (sum + g * g * rk / (1.0 - r));
}

SeriesValue kernel_series(const KernelParams& p, double u, double v, int n_max) {
  if (!(u > 0.0 && v > 0.0)) throw DomainError("kernel_series: u and v must be positive");
  if (n_max < 0) throw ContractError("kernel_series: negative truncation");
  const double a = p.alpha1();
  const auto pu = phi_all(n_max, a, u);
  const auto pv = phi_all(n_max, a, v);
  double sum = 0.0;
  double rk = 1.0;
  for (int k = 0; k <= n_max; ++k) {
    sum += rk * pu[k] * pv[k];
    rk *= p.r();
  }
  return {sum, kernel_series_tail(p, u, v, n_max), n_max};
}

SeriesValue kernel_series_auto(const KernelParams& p, double u, double v, double tol) {
  int n = 8;
  while (kernel_series_tail(p, u, v, n) > tol) {
    if (n > 2000000) throw ToleranceError("kernel_series_auto: tail bound does not reach tolerance");
    n = static_cast<int>(std::ceil(1.25 * n));
  }
  return kernel_series(p, u, v, n);
}

Function1D kernel_section(const KernelParams& p, double u) {
  Function1D f;
  f.eval = [p, u](double v) { return v > 0.0 ? kernel_closed(p, u, v) : 0.0; };
  const double r = p.r();
  const double center = section_center(r, u);
  const double width = std::sqrt((1.0 - r) / (1.0 + r));
  f.support_lo = 0.0;
  f.support_hi = center + std::sqrt(45.0 / section_rate(r)) + 1.0;
  f.decay_rate = 0.0;
  f.jumps = {center};
  f.length_scale = std::min(1.0, 2.0 * width);
  return f;
}

QuadResult kernel_diff_l2(const KernelParams& p, double u, double u_prime, const QuadSpec& spec) {
  if (!(u > 0.0 && u_prime > 0.0)) throw DomainError("kernel_diff_l2: u and u' must be positive");
  if (u == u_prime) return {};
  const QuadResult r = l2_diff_norm(kernel_section(p, u), kernel_section(p, u_prime), tight(spec));
  if (!r.converged) throw ToleranceError("kernel_diff_l2: quadrature did not converge");
  return r;
}

QuadResult kernel_l2(const KernelParams& p, double u, const QuadSpec& spec) {
  if (!(u > 0.0)) throw DomainError("kernel_l2: u must be positive");
  const QuadResult r = l2_norm_halfline(kernel_section(p, u), tight(spec));
  if (!r.converged) throw ToleranceError("kernel_l2: quadrature did not converge");
  return r;
}

QuadResult kernel_apply_basis(const KernelParams& p, int k, double u, const QuadSpec& spec) {
  Function1D f = kernel_section(p, u);
  const Function1D b = basis_function(k, p.alpha1());
  f.support_hi = std::min(f.support_hi, b.support_hi);
  f.eval = [p, u, k](double v) { return v > 0.0 ? kernel_closed(p, u, v) * phi(k, p.alpha1(), v) : 0.0; };
  f.length_scale = std::min(f.length_scale, b.length_scale);
  return integrate_halfline(f, spec);
}

QuadResult kernel_compose(double alpha, double r, double s, double u, double v, const QuadSpec& spec) {
  const KernelParams pr(alpha, r);
  const KernelParams ps(alpha, s);
  Function1D f = kernel_section(pr, u);
  const Function1D g = kernel_section(ps, v);
  f.support_hi = std::min(f.support_hi, g.support_hi);
  f.eval = [pr, ps, u, v](double w) { return w > 0.0 ? kernel_closed(pr, u, w) * kernel_closed(ps, w, v) : 0.0; };
  f.jumps.insert(f.jumps.end(), g.jumps.begin(), g.jumps.end());
  f.length_scale = std::min(f.length_scale, g.length_scale);
  return integrate_halfline(f, spec);
}

// --- ratios ------------------------------------------------------------------

double kernel_difference_ratio(double alpha, double r, double u, double u_prime) {
  if (alpha < -0.5) throw DomainError("kernel_difference_ratio: alpha must be >= -1/2");
  const double gap = std::abs(u - u_prime);
  if (gap > 0.5) throw DomainError("kernel_difference_ratio: |u - u'| must be <= 1/2");
  if (gap == 0.0) return 0.0;
  const double lhs = kernel_diff_l2(KernelParams(alpha, r), u, u_prime).value;
  const double rhs = gap / std::pow(1.0 - r, 0.75) + std::pow(gap, alpha + 0.5) / std::pow(1.0 - r, 0.5 * (alpha + 1.0));
  return lhs / rhs;
}

double basis_difference_ratio(int k, double alpha, double u, double v) {
  if (!(alpha > -0.5 && alpha < 0.5)) throw DomainError("basis_difference_ratio: alpha must lie in (-1/2, 1/2)");
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
    throw DomainError("basis_difference_ratio: u and v must lie in (0, 1)");
  const double gap = std::abs(u - v);
  if (gap == 0.0) return 0.0;
  const double lhs = std::abs(phi(k, alpha, u) - phi(k, alpha, v));
  const double rhs = gap * std::pow(k + 1.0, -0.25) + std::pow(gap, alpha + 0.5) * std::pow(k + 1.0, 0.5 * alpha);
  return lhs / rhs;
}

double kernel_weighted_norm_ratio(double alpha, double r, double u) {
  if (!(alpha > -0.5 && alpha < 0.5)) throw DomainError("kernel_weighted_norm_ratio: alpha must lie in (-1/2, 1/2)");
  if (!(r > 0.5 && r < 1.0)) throw DomainError("kernel_weighted_norm_ratio: r must lie in (1/2, 1)");
  if (!(u > 0.0)) throw DomainError("kernel_weighted_norm_ratio: u must be positive");
  const double lhs = kernel_l2(KernelParams(alpha, r), u).value / u;
  const double rhs = std::pow(1.0 - r, -0.75) + std::pow(u, alpha - 0.5) * std::pow(1.0 - r, -0.5 * (alpha + 1.0));
  return lhs / rhs;
}

}  // namespace hardylab
