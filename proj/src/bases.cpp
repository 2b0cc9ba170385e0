#include "hardylab/bases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hardylab/errors.hpp"
#include "hardylab/specfun.hpp"

namespace hardylab {

namespace {

constexpr double kRescale = 1e200;
const double kLogRescale = std::log(kRescale);

void require_positive(double u, const char* what) {
  if (!(u > 0.0)) throw DomainError(std::string(what) + ": argument must be positive");
}

// ln phi_0^alpha(u) = ln sqrt(2 / Gamma(alpha+1)) + (alpha+1/2) ln u - u^2/2.
double log_phi0(double alpha, double u) {
  return 0.5 * (std::numbers::ln2 - ln_gamma(alpha + 1.0)) + (alpha + 0.5) * std::log(u) -
         0.5 * u * u;
}

// Runs the normalized recurrence on values scaled by exp(-log_scale) and
// hands (k, phi_k) to sink.
template <typename Sink>
void run_recurrence(int kmax, double alpha, double u, Sink&& sink) {
  double log_scale = log_phi0(alpha, u);
  double factor = std::exp(log_scale);
  const double x = u * u;
  double prev = 0.0;
  double cur = 1.0;
  sink(0, cur * factor);
  for (int k = 0; k < kmax; ++k) {
    const double next =
        ((2.0 * k + alpha + 1.0 - x) * cur - std::sqrt(k * (k + alpha)) * prev) /
        std::sqrt((k + 1.0) * (k + alpha + 1.0));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
      factor = std::exp(log_scale);
    }
    sink(k + 1, cur * factor);
  }
}

// Limit of phi_k^{-1/2}(u) as u -> 0+: sqrt(2 Gamma(k+1/2) / k!) / sqrt(pi).
double phi_halfint_at_zero(int k) {
  return std::exp(0.5 * std::numbers::ln2 + 0.5 * (ln_gamma(k + 0.5) - ln_gamma(k + 1.0)) -
                  0.5 * std::log(std::numbers::pi));
}

}  // namespace

// --- index types -----------------------------------------------------------

MultiIndex::MultiIndex(std::vector<int> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ContractError("MultiIndex: dimension must be >= 1");
  for (int c : coords_)
    if (c < 0) throw ContractError("MultiIndex: negative coordinate");
}

int MultiIndex::length() const {
  int s = 0;
  for (int c : coords_) s += c;
  return s;
}

Alpha::Alpha(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ContractError("Alpha: dimension must be >= 1");
  for (double a : coords_)
    if (!(a > -1.0)) throw DomainError("Alpha: coordinates must exceed -1");
}

Alpha Alpha::uniform(std::size_t dim, double value) {
  return Alpha(std::vector<double>(dim, value));
}

bool Alpha::in_hardy_range() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double a) { return a >= -0.5; });
}

ParityVector::ParityVector(std::vector<int> bits) : bits_(std::move(bits)) {
  for (int b : bits_)
    if (b != 0 && b != 1) throw ContractError("ParityVector: entries must be 0 or 1");
}

std::vector<ParityVector> ParityVector::all(std::size_t dim) {
  std::vector<ParityVector> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
    std::vector<int> bits(dim);
    for (std::size_t i = 0; i < dim; ++i) bits[i] = (mask >> (dim - 1 - i)) & 1;
    out.emplace_back(std::move(bits));
  }
  return out;
}

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_)
    if (s != 1 && s != -1) throw ContractError("SignVector: entries must be +1 or -1");
}

int SignVector::power(const ParityVector& eta) const {
  if (eta.dim() != dim()) throw ContractError("SignVector::power: dimension mismatch");
  int p = 1;
  for (std::size_t i = 0; i < dim(); ++i)
    if (eta[i] == 1) p *= signs_[i];
  return p;
}

std::vector<SignVector> SignVector::all(std::size_t dim) {
  std::vector<SignVector> out;
  for (const auto& eta : ParityVector::all(dim)) {
    std::vector<int> s(dim);
    for (std::size_t i = 0; i < dim; ++i) s[i] = eta[i] ? -1 : 1;
    out.emplace_back(std::move(s));
  }
  return out;
}

double turning_scale(int k, double alpha) { return std::max(4.0 * k + 2.0 * alpha + 2.0, 2.0); }

// --- phi -------------------------------------------------------------------

double phi(int k, double alpha, double u) {
  require_positive(u, "phi");
  if (k < 0) throw DomainError("phi: negative degree");
  (void)Order{alpha};
  double value = 0.0;
  run_recurrence(k, alpha, u, [&](int j, double v) {
    if (j == k) value = v;
  });
  return value;
}

void phi_all(int kmax, double alpha, double u, std::span<double> out) {
  require_positive(u, "phi_all");
  if (kmax < 0) throw DomainError("phi_all: negative degree");
  if (out.size() < static_cast<std::size_t>(kmax) + 1)
    throw ContractError("phi_all: output span too short");
  (void)Order{alpha};
  run_recurrence(kmax, alpha, u, [&](int j, double v) { out[j] = v; });
}

std::vector<double> phi_all(int kmax, double alpha, double u) {
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
  phi_all(kmax, alpha, u, out);
  return out;
}

double phi_tensor(const MultiIndex& n, const Alpha& alpha, std::span<const double> x) {
  if (n.dim() != alpha.dim() || n.dim() != x.size())
    throw ContractError("phi_tensor: dimension mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < n.dim(); ++i) p *= phi(n[i], alpha[i], x[i]);
  return p;
}

double phi_derivative(int k, double alpha, double u) {
  require_positive(u, "phi_derivative");
  const double lowered = k > 0 ? -2.0 * std::sqrt(static_cast<double>(k)) * phi(k - 1, alpha + 1.0, u)
                               : 0.0;
  return lowered + ((2.0 * alpha + 1.0) / (2.0 * u) - u) * phi(k, alpha, u);
}

// --- envelope ---------------------------------------------------------------

double envelope(int k, double alpha, double u, double gamma_decay) {
  const double nu = turning_scale(k, alpha);
  if (u <= 1.0 / std::sqrt(nu)) return std::pow(u, alpha + 0.5) * std::pow(nu, 0.5 * alpha);
  if (u <= std::sqrt(0.5 * nu)) return std::pow(nu, -0.25);
  if (u <= std::sqrt(1.5 * nu))
    return std::sqrt(u) * std::pow(nu * (std::cbrt(nu) + std::abs(u * u - nu)), -0.25);
  return std::sqrt(u) * std::exp(-gamma_decay * u * u);
}

double envelope(int k, double alpha, double u) {
  return envelope(k, alpha, u, fit_envelope(alpha).gamma_decay);
}

double envelope_global_bound(double gamma_decay) {
  // Regimes 1-2 are <= nu^{-1/4} <= 2^{-1/4} once alpha >= -1/2; regime 3 is
  // <= (3/2)^{1/4} nu^{-1/12}; regime 4 peaks at u^2 = 1/(4 gamma).
  const double middle = std::pow(1.5, 0.25) * std::pow(2.0, -1.0 / 12.0);
  const double tail = std::pow(1.0 / (4.0 * gamma_decay * std::numbers::e), 0.25);
  return std::max({1.0, middle, tail});
}

SupNormBounds sup_norm_bounds(int k, double alpha) {
  if (alpha < -0.5) throw DomainError("sup_norm_bounds: alpha must be >= -1/2");
  const double nu = turning_scale(k, alpha);
  const double radius = std::sqrt(2.0 * nu) + 8.0;
  const double step = std::min(0.01, 0.2 / std::sqrt(nu));
  double sup_all = 0.0;
  double sup_unit = 0.0;
  auto visit = [&](double u) {
    const double v = std::abs(phi(k, alpha, u));
    sup_all = std::max(sup_all, v);
    if (u < 1.0) sup_unit = std::max(sup_unit, v);
  };
  for (int j = 0; j <= 400; ++j) visit(std::pow(10.0, -8.0 + 8.0 * j / 400.0) * (1.0 - 1e-12));
  for (double u = step; u <= radius; u += step) visit(u);
  return {sup_all, sup_unit, sup_all / std::pow(k + 1.0, -1.0 / 12.0),
          sup_unit / std::pow(k + 1.0, -0.25)};
}

// --- generalized Hermite -----------------------------------------------------

double gen_hermite(int n, double lambda, double u) {
  if (lambda < 0.0) throw DomainError("gen_hermite: lambda must be >= 0");
  if (n < 0) throw DomainError("gen_hermite: negative degree");
  const int k = n / 2;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double a = std::abs(u);
  if (n % 2 == 0) {
    if (a == 0.0) return lambda == 0.0 ? sign * std::numbers::sqrt2 / 2.0 * phi_halfint_at_zero(k) : 0.0;
    return sign * std::numbers::sqrt2 / 2.0 * phi(k, lambda - 0.5, a);
  }
  if (a == 0.0) return 0.0;
  return sign * std::numbers::sqrt2 / 2.0 * (u > 0 ? 1.0 : -1.0) * phi(k, lambda + 0.5, a);
}

double gen_hermite(const MultiIndex& n, std::span<const double> lambda, std::span<const double> x) {
  if (n.dim() != lambda.size() || n.dim() != x.size())
    throw ContractError("gen_hermite: dimension mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < n.dim(); ++i) p *= gen_hermite(n[i], lambda[i], x[i]);
  return p;
}

void gen_hermite_all(int nmax, double lambda, double u, std::span<double> out) {
  if (lambda < 0.0) throw DomainError("gen_hermite_all: lambda must be >= 0");
  if (out.size() < static_cast<std::size_t>(nmax) + 1)
    throw ContractError("gen_hermite_all: output span too short");
  const double a = std::abs(u);
  const int keven = nmax / 2;
  const int kodd = (nmax - 1) / 2;
  std::vector<double> even(keven + 1, 0.0);
  std::vector<double> odd(std::max(kodd, 0) + 1, 0.0);
  if (a > 0.0) {
    phi_all(keven, lambda - 0.5, a, even);
    if (kodd >= 0) phi_all(kodd, lambda + 0.5, a, odd);
  } else if (lambda == 0.0) {
    for (int k = 0; k <= keven; ++k) even[k] = phi_halfint_at_zero(k);
  }
  const double sgn = u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0);
  for (int n = 0; n <= nmax; ++n) {
    const int k = n / 2;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out[n] = n % 2 == 0 ? sign * std::numbers::sqrt2 / 2.0 * even[k]
                        : sign * std::numbers::sqrt2 / 2.0 * sgn * odd[k];
  }
}

// --- parity ------------------------------------------------------------------

FunctionNd parity_component(FunctionNd f, const ParityVector& eta) {
  const auto signs = SignVector::all(eta.dim());
  const double weight = std::ldexp(1.0, -static_cast<int>(eta.dim()));
  return [f = std::move(f), eta, signs, weight](std::span<const double> x) {
    if (x.size() != eta.dim()) throw ContractError("parity_component: dimension mismatch");
    std::vector<double> reflected(x.size());
    double sum = 0.0;
    for (const auto& eps : signs) {
      for (std::size_t i = 0; i < x.size(); ++i) reflected[i] = eps[i] * x[i];
      sum += eps.power(eta) * f(reflected);
    }
    return weight * sum;
  };
}

ParityVector parity_index(const MultiIndex& n) {
  std::vector<int> bits(n.dim());
  for (std::size_t i = 0; i < n.dim(); ++i) bits[i] = n[i] % 2;
  return ParityVector(std::move(bits));
}

std::vector<double> shifted_order(std::span<const double> lambda, const ParityVector& eta) {
  if (lambda.size() != eta.dim()) throw ContractError("shifted_order: dimension mismatch");
  std::vector<double> out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0.0) throw DomainError("shifted_order: lambda must be >= 0");
    out[i] = eta[i] == 0 ? lambda[i] - 0.5 : lambda[i] + 0.5;
  }
  return out;
}

}  // namespace hardylab
