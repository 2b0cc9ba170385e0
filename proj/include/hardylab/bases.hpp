#pragma once

// Orthonormal systems: Laguerre functions of Hermite type phi_k^alpha on
// (0, inf)^d and generalized Hermite functions h_n^lambda on R^d.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hardylab {

/// Degree vector n in N^d.
class MultiIndex {
 public:
  MultiIndex(std::vector<int> coords);  // NOLINT
  MultiIndex(std::initializer_list<int> coords) : MultiIndex(std::vector<int>(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  int length() const;  // |n| = n_1 + ... + n_d
  int operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<int>& coords() const { return coords_; }
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> coords_;
};

/// Laguerre type vector, each coordinate > -1.
class Alpha {
 public:
  Alpha(std::vector<double> coords);  // NOLINT
  Alpha(std::initializer_list<double> coords) : Alpha(std::vector<double>(coords)) {}
  static Alpha uniform(std::size_t dim, double value);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }
  /// True iff every coordinate is >= -1/2 (the range the Hardy estimates cover).
  bool in_hardy_range() const;

 private:
  std::vector<double> coords_;
};

/// eta in {0,1}^d.
class ParityVector {
 public:
  ParityVector(std::vector<int> bits);  // NOLINT
  ParityVector(std::initializer_list<int> bits) : ParityVector(std::vector<int>(bits)) {}
  std::size_t dim() const { return bits_.size(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<int>& bits() const { return bits_; }
  bool operator==(const ParityVector&) const = default;

  /// All 2^d parity vectors in lexicographic order.
  static std::vector<ParityVector> all(std::size_t dim);

 private:
  std::vector<int> bits_;
};

/// epsilon in {-1,+1}^d.
class SignVector {
 public:
  SignVector(std::vector<int> signs);  // NOLINT
  std::size_t dim() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<int>& signs() const { return signs_; }

  /// epsilon^eta = prod epsilon_i^{eta_i}.
  int power(const ParityVector& eta) const;
  static std::vector<SignVector> all(std::size_t dim);

 private:
  std::vector<int> signs_;
};

/// Turning-point scale and Gaussian decay constant of the pointwise majorant.
struct EnvelopeParams {
  double nu;           // max(4k + 2 alpha + 2, 2)
  double gamma_decay;  // decay constant of the exp(-gamma u^2) regime
};

double turning_scale(int k, double alpha);

// --- Laguerre functions of Hermite type ------------------------------------

/// phi_k^alpha(u), u > 0, by the normalized three-term recurrence.
double phi(int k, double alpha, double u);

/// phi_0^alpha(u) .. phi_{kmax}^alpha(u) written to out[0..kmax].
void phi_all(int kmax, double alpha, double u, std::span<double> out);
std::vector<double> phi_all(int kmax, double alpha, double u);

/// Product of 1-d values; n, alpha and x must share the same dimension.
double phi_tensor(const MultiIndex& n, const Alpha& alpha, std::span<const double> x);

/// d/du phi_k^alpha(u) from the lowering recurrence.
double phi_derivative(int k, double alpha, double u);

/// Four-regime pointwise majorant of |phi_k^alpha(u)|.
double envelope(int k, double alpha, double u, double gamma_decay);
/// Same, with gamma_decay taken from the fitted EnvelopeFit for alpha.
double envelope(int k, double alpha, double u);

/// Result of the max-ratio fit of |phi_k^alpha| against the envelope.
struct EnvelopeFit {
  double alpha;
  int k_max;
  double gamma_decay;
  double constant;  // max over the scan of |phi| / envelope
};

/// Fits gamma_decay and C_alpha over k <= k_max on a fixed grid. Results are
/// memoized per (alpha, k_max).
EnvelopeFit fit_envelope(double alpha, int k_max = 200);

/// Upper bound of envelope(k, alpha, u, gamma) over all k and u > 0 for
/// alpha >= -1/2.
double envelope_global_bound(double gamma_decay);

struct SupNormBounds {
  double sup_halfline;    // sup over (0, inf)
  double sup_unit;        // sup over (0, 1)
  double ratio_halfline;  // sup_halfline / (k+1)^{-1/12}
  double ratio_unit;      // sup_unit / (k+1)^{-1/4}
};

/// Dense-grid scan of |phi_k^alpha|; requires alpha >= -1/2.
SupNormBounds sup_norm_bounds(int k, double alpha);

// --- Generalized Hermite functions ----------------------------------------

/// h_n^lambda(u) in one dimension, extended continuously to u = 0.
double gen_hermite(int n, double lambda, double u);

/// Tensor product over coordinates.
double gen_hermite(const MultiIndex& n, std::span<const double> lambda,
                   std::span<const double> x);

/// h_0^lambda(u) .. h_nmax^lambda(u) at one point.
void gen_hermite_all(int nmax, double lambda, double u, std::span<double> out);

// --- Parity machinery ------------------------------------------------------

using FunctionNd = std::function<double(std::span<const double>)>;

/// f_eta(x) = 2^{-d} sum_eps eps^eta f(eps x), as a new closure.
FunctionNd parity_component(FunctionNd f, const ParityVector& eta);

/// m(n)_i = n_i mod 2.
ParityVector parity_index(const MultiIndex& n);

/// lambda_eta: lambda_i - 1/2 where eta_i = 0, lambda_i + 1/2 where eta_i = 1.
std::vector<double> shifted_order(std::span<const double> lambda, const ParityVector& eta);

}  // namespace hardylab
