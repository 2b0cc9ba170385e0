#pragma once

// Hardy sums over the Laguerre and Hermite systems, piecewise-constant
// H^1 atoms, and the experiments showing that the exponent 3d/4 is sharp.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardylab/bases.hpp"
#include "hardylab/kernels.hpp"
#include "hardylab/quadrature.hpp"

namespace hardylab {

// --- two-sided small-u bounds ------------------------------------------------

/// A k^{alpha/2} u^{alpha+1/2} <= phi_k^alpha(u) <= B k^{alpha/2} u^{alpha+1/2}
/// on 0 < u <= c / sqrt(k), verified for k_lo <= k <= k_hi.
struct BoundConstants {
  double alpha = 0.0;
  double A = 0.0;
  double B = 0.0;
  double c = 0.0;
  int k_lo = 1;
  int k_hi = 1;
};

/// Limit of phi_k^alpha(u) / (k^{alpha/2} u^{alpha+1/2}) as u -> 0+.
double bound_ratio_limit(int k, double alpha);

/// Shrinks c from 1 by factors of 0.8 until the ratio stays above half of
/// its smallest u -> 0 limit over the scanned region. alpha must be > -1/2; the half-integer
/// experiment reaches alpha = -1/2 through allow_half_integer.
/// Throws FitError when c would drop below 1e-3.
BoundConstants fit_bound_constants(double alpha, int k_max = 256, bool allow_half_integer = false);

// --- atoms -----------------------------------------------------------------

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  double volume() const;
  bool contains(std::span<const double> x) const;  // half-open (lo, hi]
};

struct AtomPiece {
  Box box;
  double value = 0.0;
};

enum class AtomKind { HalfSpace, SymmetricExtension };

struct Atom {
  std::size_t dim = 1;
  std::vector<AtomPiece> pieces;
  /// Measure of the ball the atom claims to be supported in.
  double support_ball_measure = 0.0;
  AtomKind kind = AtomKind::HalfSpace;
  /// Parity of a symmetric extension (empty for half-space atoms).
  std::vector<int> eta;
  /// Constant the raw product was divided by to satisfy the size condition.
  double normalization = 1.0;
  /// For tensor atoms: the one-dimensional pieces whose d-fold product,
  /// divided by normalization, is this atom. Empty otherwise.
  std::vector<AtomPiece> factor;

  double operator()(std::span<const double> x) const;
  /// One-dimensional atom as a Function1D with its jumps declared.
  Function1D as_function() const;
};

struct AtomParams {
  int K = 1;
  double delta = 0.25;
  double c = 1.0;
  double alpha = 0.0;

  void validate() const;
};

/// The d = 1 counterexample: -K^{1/2}/c on (0, c delta K^{-1/2}) and
/// delta K^{1/2} / (c (1 - delta)) on (c delta K^{-1/2}, c K^{-1/2}).
Atom make_counterexample_atom(const AtomParams& p);

/// prod_i a(x_i) divided by the measure ratio between the circumscribing
/// ball of the unit cube and the cube itself.
Atom tensor_atom(const AtomParams& p, std::size_t dim);

/// Measure of the ball circumscribing [0, 1]^d: omega_d (sqrt(d)/2)^d.
double cube_ball_ratio(std::size_t dim);

/// x -> prod_i sgn(x_i)^{eta_i} a(|x|) for a half-space atom a.
Atom symmetric_extension(const Atom& a, const ParityVector& eta);

struct AtomValidation {
  bool cancellation = false;
  bool size = false;
  double integral = 0.0;
  double integral_tolerance = 0.0;
  double sup_norm = 0.0;
  double ball_measure = 0.0;  // circumscribing ball of the support
  double size_product = 0.0;  // sup_norm * ball_measure, <= 1 for an atom
  /// Symmetric extensions only: every orthant piece is itself an atom.
  std::vector<bool> orthant_atoms;
  /// Symmetric extensions only: 2^{-d} times the extension is an atom.
  bool scaled_extension_atom = true;

  bool passed() const;
};

AtomValidation validate_atom(const Atom& a);

/// <a, phi_k^alpha>_+ for k = 0..kmax, d = 1.
Projection atom_coefficients(const Atom& a, double alpha, int kmax, const QuadSpec& spec = {});

/// Largest delta on {0.4, 0.3, 0.2, 0.1, 0.05, 0.025, ...} with
/// 1 - delta^{alpha+1/2} (1 + B/A) > 1/2.
double default_delta(const BoundConstants& bc);

// --- Hardy sums --------------------------------------------------------------

/// Calls visit(n) for every n in N^d with |n| = m, lexicographically.
void enumerate_level(std::size_t dim, int m, const std::function<void(const MultiIndex&)>& visit);

/// Power-law fit of the level sums on the last octave, used for the tail.
struct TailFit {
  double exponent = 0.0;   // p in C (m+1)^{-p}
  double constant = 0.0;   // C, an envelope over the octave
  double density = 0.0;    // fraction of nonzero levels in the octave
  std::size_t points = 0;  // nonzero levels used
};

struct KSample {
  int K = 0;
  int N = 0;
  double E = 0.0;
  double partial_sum = 0.0;
  double tail_estimate = 0.0;
  double control_sum = 0.0;  // same atom at E = 3d/4
  double control_tail = 0.0;
  double min_lower_ratio = 0.0;  // min_k <a,phi_k> / (k^{alpha/2} K^{-alpha/2-1/4})
  bool all_positive = true;      // <a, phi_k> > 0 for 1 <= k <= K
};

struct HardyReport {
  double E = 0.0;
  std::size_t dim = 1;
  std::vector<int> N;                 // 0..N_max
  std::vector<double> partial_sums;   // S_N, nondecreasing
  std::vector<double> level_sums;     // sum_{|n| = m} |coef|, zeros below 1e-14 removed
  double tail_estimate = 0.0;         // reported, never added
  TailFit tail_fit;
  std::vector<int> unconverged_levels;  // levels with a quadrature warning

  // Sharpness sweeps only.
  std::vector<KSample> K_sweep;
  SlopeFit fitted_slope;
  double control_spread = 0.0;  // max/min control sum over the upper half of the K-grid
  double delta = 0.0;
  BoundConstants bounds;

  double total() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

/// Coefficients below this are reported as exact zeros.
inline constexpr double kCoefficientFloor = 1e-14;

/// Builds a report from per-level coefficient magnitudes (levels[m] holds
/// every coefficient with |n| = m).
HardyReport hardy_sum_from_levels(const std::vector<std::vector<double>>& levels, double E, std::size_t dim);

/// Same from already aggregated level sums.
HardyReport hardy_sum_from_level_sums(std::vector<double> level_sums, double E, std::size_t dim);

/// sum_{k <= N} |<f, phi_k^alpha>_+| / (k+1)^E.
HardyReport hardy_sum(const Function1D& f, double alpha, double E, int n_max, const QuadSpec& spec = {});

/// Product function on R^d_+; levels aggregated by convolution.
HardyReport hardy_sum(const SeparableFunction& f, const Alpha& alpha, double E, int n_max,
                      const QuadSpec& spec = {});

/// Non-separable function on R^d_+; one product rule per multi-index.
HardyReport hardy_sum(const FunctionNdInfo& f, const Alpha& alpha, double E, int n_max,
                      const QuadSpec& spec = {});

/// Half-space atom (tensor or 1-d).
HardyReport hardy_sum(const Atom& a, const Alpha& alpha, double E, int n_max, const QuadSpec& spec = {});

/// sum_{n <= N} |<f, h_n^lambda>| / (n+1)^E on R.
HardyReport hardy_sum_hermite(const Function1D& f, double lambda, double E, int n_max,
                              const QuadSpec& spec = {});

/// Doubles N from n_start until tail_estimate <= rel_tail * sum or N would
/// pass n_cap; at(N) computes the report for one N. The last report is
/// returned either way.
HardyReport converge_hardy_sum(const std::function<HardyReport(int)>& at, double rel_tail, int n_start,
                               int n_cap);

/// converge_hardy_sum over hardy_sum_hermite.
HardyReport hardy_sum_hermite_converged(const Function1D& f, double lambda, double E, double rel_tail,
                                        int n_start = 256, int n_cap = 1 << 20, const QuadSpec& spec = {});

// --- sharpness experiments ---------------------------------------------------

struct SharpnessOptions {
  double alpha = 0.0;
  double epsilon = 0.25;
  std::vector<int> K_grid;
  std::optional<double> delta;  // default_delta when unset
  std::size_t dim = 1;
  int bound_k_max = 256;
  /// Coefficients are computed to tail_horizon * K; the mass between K and
  /// that horizon is summed exactly, the rest comes from the fitted tail.
  int tail_horizon = 64;
  QuadSpec quad{};
};

/// Sums at E = 3d/4 - epsilon truncated at N = K for each K, the E = 3d/4
/// control, and the slope of log(sum) against log(K). Each K sample's tail
/// is the explicit sum over K < |n| <= tail_horizon * K plus the fitted tail
/// beyond it.
HardyReport sharpness_experiment(const SharpnessOptions& opt);

/// Parses "start:stop:x<factor>" into a geometric integer grid.
std::vector<int> parse_k_grid(const std::string& text);

struct HalfIntegerReport {
  int K = 0;
  double delta = 0.0;
  double c = 0.0;
  std::vector<double> ratios;  // index k-1 for k = 1..K
  double min_ratio = 0.0;
  int argmin = 0;
};

/// Default delta of the alpha = -1/2 branch (any fixed delta in (0,1/2) works there).
inline constexpr double kHalfIntegerDelta = 0.25;

/// -<a, phi_k^{-1/2}> / (K^{-1} k^{3/4}) for the alpha = -1/2 atom. The raw
/// coefficient is negative; the sign is flipped so the bound reads as a
/// positive lower bound. Rejects k = 0 and k > K.
double halfinteger_coefficient_check(int K, double delta, int k);

/// All k in [1, K] at once.
HalfIntegerReport halfinteger_sweep(int K, double delta = kHalfIntegerDelta, const QuadSpec& spec = {});

struct ParityCheckReport {
  int K = 0;
  int N = 0;  // Laguerre degrees 0..N, Hermite degrees 0..2N
  double E = 0.0;
  double hermite_sum = 0.0;   // sum_k |<f, h_{2k}^0>| / (2k+1)^E
  double laguerre_sum = 0.0;  // sum_k |<a, phi_k^{-1/2}>| / (k+1)^E
  double ratio = 0.0;         // hermite_sum / (sqrt 2 * laguerre_sum)
  double lower = 0.0;         // 2^{-E}
  double upper = 1.0;
  double max_coefficient_mismatch = 0.0;  // max_k ||<f,h_2k>| - sqrt2 |<a,phi_k>||
  bool passed() const { return ratio >= lower && ratio <= upper; }
};

/// Even extension f(u) = a(|u|) of the alpha = -1/2 atom, compared on the
/// Hermite side (lambda = 0, even degrees) and the Laguerre side.
ParityCheckReport parity_check(int K, double E = 0.75, double delta = kHalfIntegerDelta, const QuadSpec& spec = {});

}  // namespace hardylab
