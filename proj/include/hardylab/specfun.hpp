#pragma once

// Scalar special functions: log-gamma, generalized Laguerre polynomials and
// the modified Bessel function of the first kind with real order.

namespace hardylab {

/// Laguerre type parameter / Bessel order, restricted to (-1, inf).
class Order {
 public:
  Order(double value);  // NOLINT(google-explicit-constructor): checked numeric type
  double value() const { return value_; }
  operator double() const { return value_; }  // NOLINT

 private:
  double value_;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// L_k^alpha(x) by the three-term upward recurrence.
double laguerre_poly(int k, Order alpha, double x);

/// I_nu(x), x >= 0. Overflows to +inf past x ~ 713.
double bessel_i(Order nu, double x);

/// exp(-x) I_nu(x), finite for all x >= 0 (nu > -1, x > 0).
double bessel_i_scaled(Order nu, double x);

/// ln I_nu(x). Returns -inf at x = 0 for nu > 0 and +inf for nu < 0.
double log_bessel_i(Order nu, double x);

/// Argument at which log_bessel_i switches from the power series to the
/// large-argument expansion: max(20, 2 nu^2).
double bessel_switch_point(double nu);

namespace detail {
// Both branches of log_bessel_i, exposed so their agreement can be tested.
double log_bessel_i_series(double nu, double x);
double log_bessel_i_asymptotic(double nu, double x);
}  // namespace detail

}  // namespace hardylab
