#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "hardylab/errors.hpp"
#include "hardylab/hardy.hpp"
#include "hardylab/specfun.hpp"

namespace hardylab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double unit_ball_measure(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

double circumscribing_ball(const std::vector<AtomPiece>& pieces, std::size_t d) {
  if (pieces.empty()) return 0.0;
  double diag2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : pieces) {
      lo = std::min(lo, p.box.lo[i]);
      hi = std::max(hi, p.box.hi[i]);
    }
    diag2 += (hi - lo) * (hi - lo);
  }
  return unit_ball_measure(d) * std::pow(0.5 * std::sqrt(diag2), static_cast<double>(d));
}

// Sum of value * volume with error-free products and Neumaier summation.
struct Mass {
  double integral;
  double magnitude;  // sum |value * volume|
};

Mass compensated_mass(const std::vector<AtomPiece>& pieces) {
  double s = 0.0;
  double comp = 0.0;
  double magnitude = 0.0;
  for (const auto& piece : pieces) {
    const double vol = piece.box.volume();
    const double p = piece.value * vol;
    const double p_err = std::fma(piece.value, vol, -p);
    const double t = s + p;
    comp += std::abs(s) >= std::abs(p) ? (s - t) + p : (p - t) + s;
    comp += p_err;
    s = t;
    magnitude += std::abs(p);
  }
  return {s + comp, magnitude};
}

struct SizeAndMass {
  bool cancellation;
  bool size;
  double integral;
  double tolerance;
  double sup;
  double ball;
};

SizeAndMass check_pieces(const std::vector<AtomPiece>& pieces, std::size_t d, double size_budget) {
  const Mass m = compensated_mass(pieces);
  // Rounding in the piece widths and heights is a few ulps per piece.
  const double tol = 16.0 * kEps * m.magnitude * static_cast<double>(std::max<std::size_t>(1, d));
  double sup = 0.0;
  for (const auto& p : pieces) sup = std::max(sup, std::abs(p.value));
  const double ball = circumscribing_ball(pieces, d);
  return {std::abs(m.integral) <= tol, sup * ball <= size_budget * (1.0 + 16.0 * kEps), m.integral, tol, sup, ball};
}

struct FitKey {
  double alpha;
  int k_max;
  bool half;
  auto operator<=>(const FitKey&) const = default;
};

BoundConstants compute_bound_constants(double alpha, int k_max) {
  constexpr int kPoints = 121;  // t = 10^{-6} .. 1
  // Accept c once the ratio never drops below half of the smallest u -> 0
  // limit: a positive lower bound with a margin that does not depend on k.
  double floor = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) floor = std::min(floor, bound_ratio_limit(k, alpha));
  floor *= 0.5;
  for (double c = 1.0; c >= 1e-3; c *= 0.8) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool sign_change = false;
    for (int k = 1; k <= k_max; ++k) {
      const double lim = bound_ratio_limit(k, alpha);
      lo = std::min(lo, lim);
      hi = std::max(hi, lim);
      const double scale = std::pow(static_cast<double>(k), 0.5 * alpha);
      for (int j = 0; j < kPoints; ++j) {
        const double t = std::pow(10.0, -6.0 + 6.0 * j / (kPoints - 1));
        const double u = c * t / std::sqrt(static_cast<double>(k));
        const double ratio = phi(k, alpha, u) / (scale * std::pow(u, alpha + 0.5));
        if (!(ratio > 0.0)) sign_change = true;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    if (!sign_change && lo >= floor) return {alpha, lo, hi, c, 1, k_max};
  }
  throw FitError("fit_bound_constants: no c >= 1e-3 keeps the ratio above half its small-u limit");
}

}  // namespace

double bound_ratio_limit(int k, double alpha) {
  if (k < 1) throw DomainError("bound_ratio_limit: k must be >= 1");
  const double log_v = 0.5 * (std::log(2.0) + ln_gamma(k + alpha + 1.0) - ln_gamma(k + 1.0)) -
                       ln_gamma(alpha + 1.0) - 0.5 * alpha * std::log(static_cast<double>(k));
  return std::exp(log_v);
}

BoundConstants fit_bound_constants(double alpha, int k_max, bool allow_half_integer) {
  if (!(alpha > -0.5) && !(allow_half_integer && alpha == -0.5))
    throw DomainError("fit_bound_constants: alpha must be > -1/2");
  if (k_max < 1) throw ContractError("fit_bound_constants: k_max must be >= 1");
  static std::mutex mutex;
  static std::map<FitKey, BoundConstants> cache;
  const FitKey key{alpha, k_max, allow_half_integer};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const BoundConstants bc = compute_bound_constants(alpha, k_max);
  std::lock_guard lock(mutex);
  return cache.emplace(key, bc).first->second;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(x[i] > lo[i] && x[i] <= hi[i])) return false;
  return true;
}

double Atom::operator()(std::span<const double> x) const {
  if (x.size() != dim) throw ContractError("Atom: dimension mismatch");
  for (const auto& p : pieces)
    if (p.box.contains(x)) return p.value;
  return 0.0;
}

Function1D Atom::as_function() const {
  if (dim != 1) throw ContractError("Atom::as_function: one-dimensional atoms only");
  Function1D f;
  f.eval = [pieces = pieces](double u) {
    for (const auto& p : pieces)
      if (u > p.box.lo[0] && u <= p.box.hi[0]) return p.value;
    return 0.0;
  };
  f.support_lo = std::numeric_limits<double>::infinity();
  f.support_hi = -f.support_lo;
  for (const auto& p : pieces) {
    f.support_lo = std::min(f.support_lo, p.box.lo[0]);
    f.support_hi = std::max(f.support_hi, p.box.hi[0]);
    f.jumps.push_back(p.box.lo[0]);
    f.jumps.push_back(p.box.hi[0]);
  }
  f.length_scale = 0.25 * (f.support_hi - f.support_lo);
  return f;
}

void AtomParams::validate() const {
  if (K < 1) throw ContractError("AtomParams: K must be >= 1");
  if (!(delta > 0.0 && delta < 0.5)) throw ContractError("AtomParams: delta must lie in (0, 1/2)");
  if (!(c > 0.0)) throw ContractError("AtomParams: c must be positive");
  (void)Order{alpha};
}

Atom make_counterexample_atom(const AtomParams& p) {
  p.validate();
  const double root_k = std::sqrt(static_cast<double>(p.K));
  const double outer = p.c / root_k;
  const double inner = p.c * p.delta / root_k;
  Atom a;
  a.dim = 1;
  a.pieces.push_back({Box{{0.0}, {inner}}, -root_k / p.c});
  a.pieces.push_back({Box{{inner}, {outer}}, p.delta * root_k / (p.c * (1.0 - p.delta))});
  a.support_ball_measure = outer;
  return a;
}

double cube_ball_ratio(std::size_t dim) {
  return unit_ball_measure(dim) * std::pow(0.5 * std::sqrt(static_cast<double>(dim)), static_cast<double>(dim));
}

Atom tensor_atom(const AtomParams& p, std::size_t dim) {
  if (dim < 1) throw ContractError("tensor_atom: dim must be >= 1");
  const Atom one = make_counterexample_atom(p);
  Atom a;
  a.dim = dim;
  a.normalization = cube_ball_ratio(dim);
  a.factor = one.pieces;
  const std::size_t m = one.pieces.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= m;
  for (std::size_t code = 0; code < total; ++code) {
    AtomPiece piece;
    piece.value = 1.0 / a.normalization;
    std::size_t rest = code;
    for (std::size_t i = 0; i < dim; ++i) {
      const auto& src = one.pieces[rest % m];
      rest /= m;
      piece.box.lo.push_back(src.box.lo[0]);
      piece.box.hi.push_back(src.box.hi[0]);
      piece.value *= src.value;
    }
    a.pieces.push_back(std::move(piece));
  }
  a.support_ball_measure = a.normalization * std::pow(one.support_ball_measure, static_cast<double>(dim));
  return a;
}

Atom symmetric_extension(const Atom& a, const ParityVector& eta) {
  if (a.kind != AtomKind::HalfSpace) throw ContractError("symmetric_extension: input must be a half-space atom");
  if (eta.dim() != a.dim) throw ContractError("symmetric_extension: dimension mismatch");
  Atom ext;
  ext.dim = a.dim;
  ext.kind = AtomKind::SymmetricExtension;
  ext.eta = eta.bits();
  ext.normalization = a.normalization;
  for (const auto& eps : SignVector::all(a.dim)) {
    const int sign = eps.power(eta);
    for (const auto& p : a.pieces) {
      AtomPiece q;
      q.value = sign * p.value;
      for (std::size_t i = 0; i < a.dim; ++i) {
        q.box.lo.push_back(eps[i] > 0 ? p.box.lo[i] : -p.box.hi[i]);
        q.box.hi.push_back(eps[i] > 0 ? p.box.hi[i] : -p.box.lo[i]);
      }
      ext.pieces.push_back(std::move(q));
    }
  }
  ext.support_ball_measure = circumscribing_ball(ext.pieces, ext.dim);
  return ext;
}

bool AtomValidation::passed() const {
  if (orthant_atoms.empty()) return cancellation && size;
  return cancellation && scaled_extension_atom &&
         std::all_of(orthant_atoms.begin(), orthant_atoms.end(), [](bool b) { return b; });
}

AtomValidation validate_atom(const Atom& a) {
  AtomValidation v;
  const SizeAndMass whole = check_pieces(a.pieces, a.dim, 1.0);
  v.cancellation = whole.cancellation;
  v.size = whole.size;
  v.integral = whole.integral;
  v.integral_tolerance = whole.tolerance;
  v.sup_norm = whole.sup;
  v.ball_measure = whole.ball;
  v.size_product = whole.sup * whole.ball;
  if (a.kind == AtomKind::SymmetricExtension) {
    // The extension is 2^d times an atom on the doubled ball; each orthant
    // piece is a reflected copy of the original atom.
    const double budget = std::ldexp(1.0, static_cast<int>(a.dim));
    v.scaled_extension_atom = v.size_product <= budget * (1.0 + 16.0 * kEps);
    for (const auto& eps : SignVector::all(a.dim)) {
      std::vector<AtomPiece> orthant;
      for (const auto& p : a.pieces) {
        bool inside = true;
        for (std::size_t i = 0; i < a.dim; ++i) {
          const double mid = 0.5 * (p.box.lo[i] + p.box.hi[i]);
          if ((mid > 0.0) != (eps[i] > 0)) inside = false;
        }
        if (inside) orthant.push_back(p);
      }
      const SizeAndMass part = check_pieces(orthant, a.dim, 1.0);
      v.orthant_atoms.push_back(!orthant.empty() && part.cancellation && part.size);
    }
  }
  return v;
}

Projection atom_coefficients(const Atom& a, double alpha, int kmax, const QuadSpec& spec) {
  if (a.dim != 1 || a.kind != AtomKind::HalfSpace)
    throw ContractError("atom_coefficients: one-dimensional half-space atoms only");
  return project_halfline(a.as_function(), alpha, kmax, spec);
}

double default_delta(const BoundConstants& bc) {
  auto works = [&](double d) { return 1.0 - std::pow(d, bc.alpha + 0.5) * (1.0 + bc.B / bc.A) > 0.5; };
  for (double d : {0.4, 0.3, 0.2, 0.1})
    if (works(d)) return d;
  for (double d = 0.05; d >= 1e-6; d *= 0.5)
    if (works(d)) return d;
  throw FitError("default_delta: no delta >= 1e-6 satisfies the positivity condition");
}

}  // namespace hardylab
