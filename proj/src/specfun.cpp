#include "hardylab/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hardylab/errors.hpp"
#include "hardylab/parallel.hpp"

namespace hardylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rescaling threshold for the Bessel power series accumulator.
constexpr double kBig = 1e280;
const double kLogBig = std::log(kBig);

}  // namespace

Order::Order(double value) : value_(value) {
  if (!(value > -1.0))
    throw DomainError("order must exceed -1, got " + std::to_string(value));
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive");
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double laguerre_poly(int k, Order alpha, double x) {
  if (k < 0) throw DomainError("laguerre_poly: negative degree");
  if (x < 0.0) throw DomainError("laguerre_poly: negative argument");
  const double a = alpha;
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + a + 1.0 - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double bessel_switch_point(double nu) { return std::max(20.0, 2.0 * nu * nu); }

namespace detail {

double log_bessel_i_series(double nu, double x) {
  // I_nu(x) = (x/2)^nu / Gamma(nu+1) * sum_k rho_k,
  // rho_{k+1} = rho_k * (x^2/4) / ((k+1)(k+nu+1)).
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  double carry = 0.0;
  double log_offset = 0.0;
  for (int k = 0; k < 100000; ++k) {
    term *= q / ((k + 1.0) * (k + nu + 1.0));
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (sum > kBig) {
      sum /= kBig;
      term /= kBig;
      carry /= kBig;
      log_offset += kLogBig;
    }
    if (k + 1.0 > q && term < 1e-17 * sum) break;
  }
  return nu * std::log(0.5 * x) - ln_gamma(nu + 1.0) + std::log(sum) + log_offset;
}

double log_bessel_i_asymptotic(double nu, double x) {
  // I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k,
  // a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (8 j). Truncated at the
  // smallest term.
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  KahanSum sum;
  sum.add(1.0);
  double last = 1.0;
  for (int j = 1; j < 200; ++j) {
    const double odd = 2.0 * j - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * j * x);
    if (std::abs(next) >= std::abs(last) || next == 0.0) break;
    sum.add(next);
    term = next;
    last = std::abs(next);
    if (last < 1e-17 * std::abs(sum.value())) break;
  }
  return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum.value());
}

}  // namespace detail

double log_bessel_i(Order nu_order, double x) {
  const double nu = nu_order;
  if (x < 0.0 || std::isnan(x)) throw DomainError("bessel_i: negative argument");
  if (x == 0.0) {
    if (nu == 0.0) return 0.0;
    return nu > 0.0 ? -kInf : kInf;
  }
  if (x < bessel_switch_point(nu)) return detail::log_bessel_i_series(nu, x);
  return detail::log_bessel_i_asymptotic(nu, x);
}

double bessel_i(Order nu, double x) { return std::exp(log_bessel_i(nu, x)); }

double bessel_i_scaled(Order nu, double x) {
  if (x == 0.0) return bessel_i(nu, x);
  return std::exp(log_bessel_i(nu, x) - x);
}

}  // namespace hardylab
