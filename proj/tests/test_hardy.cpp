#include <doctest.h>

#include <cmath>

#include "hardylab/bases.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/hardy.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/specfun.hpp"

using namespace hardylab;

namespace {

Function1D gaussian(double scale = 1.0) {
  Function1D f;
  f.eval = [scale](double u) { return scale * std::exp(-u * u); };
  f.decay_rate = 1.0;
  return f;
}

}  // namespace

TEST_CASE("small-u ratio limit") {
  // phi_k(u) / (k^{a/2} u^{a+1/2}) at tiny u.
  for (double a : {-0.3, 0.0, 2.0})
    for (int k : {1, 5, 40}) {
      const double u = 1e-7;
      const double direct = phi(k, a, u) / (std::pow(k, a / 2) * std::pow(u, a + 0.5));
      CHECK(bound_ratio_limit(k, a) == doctest::Approx(direct).epsilon(1e-6));
      CHECK(bound_ratio_limit(k, a) > 0.0);
    }
}

TEST_CASE("fitted bound constants") {
  for (double a : {-0.3, 0.0, 0.7, 2.0}) {
    const BoundConstants bc = fit_bound_constants(a, 128);
    CHECK(bc.A > 0.0);
    CHECK(bc.A <= bc.B);
    CHECK(bc.c >= 1e-3);
    const BoundConstants wide = fit_bound_constants(a, 256);
    CHECK(std::abs(wide.c / bc.c - 1.0) <= 0.2);
    // Spot-check the two-sided bound inside the verified region.
    for (int k : {1, 17, 128})
      for (double t : {1e-3, 0.3, 1.0}) {
        const double u = t * bc.c / std::sqrt(k);
        const double ratio = phi(k, a, u) / (std::pow(k, a / 2) * std::pow(u, a + 0.5));
        CHECK(ratio >= bc.A * (1 - 1e-12));
        CHECK(ratio <= bc.B * (1 + 1e-12));
      }
  }
  CHECK_THROWS_AS(fit_bound_constants(-0.5), DomainError);
}

TEST_CASE("counterexample atom") {
  const AtomParams p{100, 0.25, 0.8, 0.0};
  const Atom a = make_counterexample_atom(p);
  REQUIRE(a.pieces.size() == 2);
  CHECK(a.pieces[0].value == doctest::Approx(-10.0 / 0.8));
  CHECK(a.pieces[1].value == doctest::Approx(0.25 * 10.0 / (0.8 * 0.75)));
  const AtomValidation v = validate_atom(a);
  CHECK(v.passed());
  CHECK(std::abs(v.integral) <= v.integral_tolerance);
  CHECK(v.size_product <= 1.0 + 1e-15);

  CHECK_THROWS_AS(make_counterexample_atom({0, 0.25, 1.0, 0.0}), ContractError);
  CHECK_THROWS_AS(make_counterexample_atom({4, 0.5, 1.0, 0.0}), ContractError);
  CHECK_THROWS_AS(make_counterexample_atom({4, 0.25, -1.0, 0.0}), ContractError);
}

TEST_CASE("validation catches broken atoms") {
  Atom bump = make_counterexample_atom({16, 0.25, 1.0, 0.0});
  for (auto& piece : bump.pieces) piece.value = std::abs(piece.value) * 0.1;
  const AtomValidation v1 = validate_atom(bump);
  CHECK_FALSE(v1.cancellation);
  CHECK_FALSE(v1.passed());

  Atom tall = make_counterexample_atom({16, 0.25, 1.0, 0.0});
  for (auto& piece : tall.pieces) piece.value *= 2.0;
  const AtomValidation v2 = validate_atom(tall);
  CHECK(v2.cancellation);
  CHECK_FALSE(v2.size);
}

TEST_CASE("tensor atoms and symmetric extensions") {
  const AtomParams p{16, 0.25, 1.0, 0.0};
  for (std::size_t d : {2u, 3u}) {
    const Atom t = tensor_atom(p, d);
    CHECK(t.pieces.size() == (1u << d));
    CHECK(t.normalization == doctest::Approx(cube_ball_ratio(d)));
    CHECK(validate_atom(t).passed());
  }
  CHECK(cube_ball_ratio(2) == doctest::Approx(M_PI / 2));

  const Atom one = make_counterexample_atom(p);
  const Atom ext = symmetric_extension(one, {1});
  CHECK(ext.kind == AtomKind::SymmetricExtension);
  const std::array<double, 1> x{0.1}, mx{-0.1};
  CHECK(ext(mx) == -ext(x));
  const AtomValidation v = validate_atom(ext);
  CHECK(v.passed());
  REQUIRE(v.orthant_atoms.size() == 2);
  CHECK(v.orthant_atoms[0]);
  CHECK(v.scaled_extension_atom);
}

TEST_CASE("default delta follows the positivity rule") {
  const BoundConstants bc = fit_bound_constants(0.0, 256);
  const double d = default_delta(bc);
  CHECK(1.0 - std::pow(d, 0.5) * (1.0 + bc.B / bc.A) > 0.5);
}

TEST_CASE("atom coefficients are positive at the default delta") {
  for (double a : {0.0, 0.3}) {
    const BoundConstants bc = fit_bound_constants(a, 256);
    const Atom atom = make_counterexample_atom({128, default_delta(bc), bc.c, a});
    const Projection pr = atom_coefficients(atom, a, 128);
    for (int k = 1; k <= 128; ++k) CHECK(pr.coefficients[k] > 0.0);
  }
}

TEST_CASE("level enumeration") {
  int count = 0;
  MultiIndex last{0, 0, 0};
  enumerate_level(3, 4, [&](const MultiIndex& n) {
    CHECK(n.length() == 4);
    if (count > 0) CHECK(last.coords() < n.coords());
    last = n;
    ++count;
  });
  CHECK(count == 15);  // binom(6, 2)
}

TEST_CASE("hardy sum of a basis function") {
  for (int m : {0, 3, 9}) {
    const HardyReport h = hardy_sum(basis_function(m, 0.5), 0.5, 0.75, 20);
    CHECK(h.total() == doctest::Approx(std::pow(m + 1.0, -0.75)).epsilon(1e-9));
  }
}

TEST_CASE("hardy sum of a Gaussian converges, monotone partial sums") {
  // e^{-u^2} does not vanish like u^{1/2} at the origin, so its coefficients
  // decay like k^{-3/4}; with E = 3/4 the terms still fall off like k^{-3/2}.
  const HardyReport h = hardy_sum(gaussian(), 0.0, 0.75, 400);
  for (std::size_t i = 1; i < h.partial_sums.size(); ++i) CHECK(h.partial_sums[i] >= h.partial_sums[i - 1]);
  CHECK(h.tail_fit.exponent == doctest::Approx(0.75).epsilon(0.05));
  CHECK(std::isfinite(h.tail_estimate));
  CHECK(h.tail_estimate < 0.05 * h.total());

  // Matching the basis behaviour at 0 gives geometric decay of the increments.
  Function1D adapted;
  adapted.eval = [](double u) { return std::sqrt(u) * std::exp(-u * u); };
  adapted.decay_rate = 1.0;
  adapted.singular_points = {0.0};
  const HardyReport g = hardy_sum(adapted, 0.0, 0.75, 60);
  for (int m = 2; m <= 12; ++m) CHECK(g.level_sums[m] < 0.5 * g.level_sums[m - 2]);
  CHECK(g.partial_sums[60] - g.partial_sums[30] == 0.0);
}

TEST_CASE("scaling f scales the sum exactly") {
  const HardyReport h1 = hardy_sum(gaussian(1.0), 0.3, 0.75, 60);
  const HardyReport h2 = hardy_sum(gaussian(-4.0), 0.3, 0.75, 60);
  for (std::size_t i = 0; i < h1.partial_sums.size(); ++i)
    CHECK(h2.partial_sums[i] == doctest::Approx(4.0 * h1.partial_sums[i]).epsilon(1e-13));

  const std::vector<double> K{16, 32, 64, 128};
  std::vector<double> s{1.0, 1.2, 1.45, 1.7}, scaled;
  for (double v : s) scaled.push_back(3.5 * v);
  CHECK(fit_loglog_slope(K, s).slope == doctest::Approx(fit_loglog_slope(K, scaled).slope).epsilon(1e-12));
}

TEST_CASE("d = 2 separable sum equals brute-force enumeration") {
  Function1D g1 = gaussian();
  Function1D g2;
  g2.eval = [](double u) { return u * std::exp(-0.7 * u * u); };
  g2.decay_rate = 0.7;
  const SeparableFunction f{{g1, g2}};
  const Alpha alpha{0.0, 0.5};
  const int N = 50;
  const double E = 1.5;
  const HardyReport h = hardy_sum(f, alpha, E, N);

  const Projection p1 = project_halfline(g1, 0.0, N);
  const Projection p2 = project_halfline(g2, 0.5, N);
  double brute = 0.0;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j) {
      const double c = std::abs(p1.coefficients[i] * p2.coefficients[j]);
      if (c >= kCoefficientFloor) brute += c / std::pow(i + j + 1.0, E);
    }
  CHECK(h.total() == doctest::Approx(brute).epsilon(1e-10));

  FunctionNdInfo nd;
  nd.dim = 2;
  nd.decay_rate = 0.7;
  nd.eval = [f](std::span<const double> x) { return f(x); };
  const HardyReport hn = hardy_sum(nd, alpha, E, 12);
  const HardyReport hs = hardy_sum(f, alpha, E, 12);
  CHECK(hn.total() == doctest::Approx(hs.total()).epsilon(1e-7));
}

TEST_CASE("tail fit on a pure power law") {
  std::vector<double> levels;
  for (int m = 0; m <= 256; ++m) levels.push_back(2.0 * std::pow(m + 1.0, -1.5));
  const HardyReport h = hardy_sum_from_level_sums(levels, 0.75, 1);
  CHECK(h.tail_fit.exponent == doctest::Approx(1.5).epsilon(1e-6));
  // The exact tail sum over m > 256 of 2 (m+1)^{-2.25} is below the estimate.
  double exact = 0.0;
  for (int m = 257; m < 4000000; ++m) exact += 2.0 * std::pow(m + 1.0, -2.25);
  CHECK(h.tail_estimate >= exact);
  CHECK(h.tail_estimate <= 4.0 * exact);
}

TEST_CASE("sharpness grid handling") {
  CHECK(parse_k_grid("16:128:x2") == std::vector<int>{16, 32, 64, 128});
  CHECK(parse_k_grid("64") == std::vector<int>{64});
  CHECK_THROWS_AS(parse_k_grid("16:8:x2"), ContractError);
  CHECK_THROWS_AS(parse_k_grid("a:b"), ContractError);

  SharpnessOptions one;
  one.K_grid = {64};
  const HardyReport single = sharpness_experiment(one);
  CHECK(single.K_sweep.size() == 1);
  CHECK(single.fitted_slope.points == 0);

  SharpnessOptions three;
  three.K_grid = {16, 32, 64};
  CHECK_THROWS_AS(sharpness_experiment(three), FitError);
}

TEST_CASE("half-integer coefficient check") {
  CHECK_THROWS_AS(halfinteger_coefficient_check(64, 0.25, 0), ContractError);
  CHECK_THROWS_AS(halfinteger_coefficient_check(64, 0.25, 65), ContractError);
  const HalfIntegerReport r = halfinteger_sweep(1024);
  for (double v : r.ratios) CHECK(v > 0.0);
  CHECK(r.min_ratio > 0.0);
  CHECK(halfinteger_coefficient_check(64, 0.25, 10) == doctest::Approx(halfinteger_sweep(64).ratios[9]).epsilon(1e-8));
}

TEST_CASE("parity reduction of the half-integer atom") {
  const ParityCheckReport p = parity_check(64);
  CHECK(p.passed());
  CHECK(p.max_coefficient_mismatch < 1e-8);
  CHECK(p.lower == doctest::Approx(std::pow(2.0, -0.75)));
}

TEST_CASE("Hermite sum converges for an integrable rough function") {
  Function1D f;
  f.eval = [](double u) { return u > -0.5 && u < 1.0 ? 1.0 : 0.0; };
  f.support_lo = -0.5;
  f.support_hi = 1.0;
  f.jumps = {-0.5, 1.0};
  const HardyReport h = hardy_sum_hermite_converged(f, 0.0, 0.85, 0.01);
  CHECK(h.tail_estimate <= 0.01 * h.total());
}
