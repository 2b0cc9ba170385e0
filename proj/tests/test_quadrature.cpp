#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "hardylab/bases.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/hardy.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/specfun.hpp"

using namespace hardylab;

namespace {

struct ClosedCase {
  std::string name;
  Function1D g;
  double exact;
  QuadSpec spec{};
};

// u^s exp(-u^2): integral Gamma((s+1)/2) / 2.
ClosedCase moment(double s) {
  Function1D g;
  g.eval = [s](double u) { return std::pow(u, s) * std::exp(-u * u); };
  g.decay_rate = 1.0;
  g.singular_points = {0.0};
  return {"moment " + std::to_string(s), g, 0.5 * std::tgamma(0.5 * (s + 1.0))};
}

// phi_j phi_k on the half line: delta_jk.
ClosedCase gram(int j, int k, double alpha) {
  Function1D g;
  g.eval = [=](double u) { return phi(j, alpha, u) * phi(k, alpha, u); };
  g.decay_rate = 0.5;
  g.singular_points = {0.0};
  g.support_hi = std::sqrt(2.0 * turning_scale(std::max(j, k), alpha)) + 8.0;
  return {"gram", g, j == k ? 1.0 : 0.0};
}

std::vector<ClosedCase> closed_form_suite() {
  std::vector<ClosedCase> cases;
  for (double s : {-0.5, -0.3, 0.0, 0.4, 1.0, 2.0, 3.5, 6.0}) cases.push_back(moment(s));
  for (double a : {-0.5, -0.3, 0.0, 0.7, 2.0})
    for (auto [j, k] : {std::pair{0, 0}, {3, 3}, {7, 2}, {20, 20}}) cases.push_back(gram(j, k, a));

  Function1D exp_power;
  exp_power.eval = [](double u) { return std::pow(u, -0.25) * std::exp(-u); };
  exp_power.singular_points = {0.0};
  QuadSpec far;
  far.truncation_radius = 80.0;
  cases.push_back({"u^-1/4 e^-u", exp_power, std::tgamma(0.75), far});

  Function1D log_sing;
  log_sing.eval = [](double u) { return -std::log(u); };
  log_sing.support_hi = 1.0;
  log_sing.singular_points = {0.0};
  cases.push_back({"-log u on (0,1)", log_sing, 1.0});

  Function1D step;
  step.eval = [](double u) { return u < 0.3 ? 2.0 : (u < 1.1 ? -0.5 : 0.0); };
  step.support_hi = 1.1;
  step.jumps = {0.3};
  cases.push_back({"step", step, 0.6 - 0.4});
  return cases;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  const GaussRule& rule = gauss_legendre(8);
  CHECK(rule.nodes.size() == 8);
  double s = 0.0;
  for (std::size_t i = 0; i < 8; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("half-line integrals with known values") {
  Function1D gauss;
  gauss.eval = [](double u) { return std::exp(-u * u); };
  gauss.decay_rate = 1.0;
  CHECK(integrate_halfline(gauss).value == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-12));
  CHECK(integrate_line(gauss).value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

  Function1D sq = basis_function(3, 0.5);
  sq.eval = [](double u) { return std::pow(phi(3, 0.5, u), 2); };
  CHECK(integrate_halfline(sq).value == doctest::Approx(1.0).epsilon(1e-11));

  Function1D missing;
  missing.eval = [](double) { return 1.0; };
  CHECK_THROWS_AS(integrate_halfline(missing), ContractError);
}

TEST_CASE("reported error bounds the true error on the closed-form suite") {
  const auto cases = closed_form_suite();
  REQUIRE(cases.size() >= 30);
  for (const auto& c : cases) {
    const QuadResult r = integrate_halfline(c.g, c.spec);
    CAPTURE(c.name);
    CHECK(r.converged);
    // A few ulps of the magnitude are below what any estimate can resolve.
    CHECK(std::abs(r.value - c.exact) <= r.error_estimate + 1e-15 * std::max(1.0, std::abs(c.exact)));
    CHECK(std::abs(r.value - c.exact) <= 1e-9);
  }
}

TEST_CASE("halving the tolerances does not increase the true error") {
  for (const auto& c : closed_form_suite()) {
    QuadSpec loose = c.spec;
    loose.abs_tol = 1e-6;
    loose.rel_tol = 1e-5;
    QuadSpec tight = loose;
    tight.abs_tol /= 2;
    tight.rel_tol /= 2;
    const double e1 = std::abs(integrate_halfline(c.g, loose).value - c.exact);
    const double e2 = std::abs(integrate_halfline(c.g, tight).value - c.exact);
    CAPTURE(c.name);
    CHECK(e2 <= e1 + 4e-16 * std::max(1.0, std::abs(c.exact)));
  }
}

TEST_CASE("L2 norms") {
  Function1D g;
  g.eval = [](double u) { return std::exp(-u * u / 2); };
  g.decay_rate = 0.5;
  CHECK(l2_norm_halfline(g).value == doctest::Approx(std::sqrt(std::sqrt(M_PI) / 2)).epsilon(1e-12));
  CHECK(l2_norm_halfline(g).value == doctest::Approx(0.94139626377671481).epsilon(1e-14));
  CHECK(l2_diff_norm(g, g).value == 0.0);
  for (double a : {-0.5, 0.0, 1.5}) CHECK(l2_norm_halfline(basis_function(9, a)).value == doctest::Approx(1.0));
}

TEST_CASE("inner products with basis functions") {
  for (double a : {-0.5, 0.3}) {
    const Function1D f = basis_function(4, a);
    CHECK(inner_product_plus(f, 4, a).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(inner_product_plus(f, 5, a).value) < 1e-10);
  }
}

TEST_CASE("separable inner products factor") {
  Function1D g1, g2;
  g1.eval = [](double u) { return std::exp(-u * u) * (1 + u); };
  g2.eval = [](double u) { return u * std::exp(-0.5 * u * u); };
  g1.decay_rate = 1.0;
  g2.decay_rate = 0.5;
  const SeparableFunction f{{g1, g2}};
  const Alpha alpha{0.0, 0.5};
  const MultiIndex n{2, 3};
  const double product = inner_product_plus(g1, 2, 0.0).value * inner_product_plus(g2, 3, 0.5).value;
  CHECK(inner_product_plus(f, n, alpha).value == doctest::Approx(product).epsilon(1e-12));

  FunctionNdInfo nd;
  nd.dim = 2;
  nd.decay_rate = 0.5;
  nd.eval = [f](std::span<const double> x) { return f(x); };
  CHECK(inner_product_plus(nd, n, alpha).value == doctest::Approx(product).epsilon(1e-8));
}

TEST_CASE("atom inner product matches piecewise bisection") {
  const Atom a = make_counterexample_atom({64, 0.25, 0.8, 0.0});
  // Independent oracle: recursive Simpson on each constant piece.
  auto simpson = [](auto&& self, auto&& g, double lo, double hi, double whole, int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double l = (hi - lo) / 12.0 * (g(lo) + 4 * g(0.5 * (lo + mid)) + g(mid));
    const double r = (hi - lo) / 12.0 * (g(mid) + 4 * g(0.5 * (mid + hi)) + g(hi));
    if (depth > 40 || std::abs(l + r - whole) < 1e-15) return l + r + (l + r - whole) / 15.0;
    return self(self, g, lo, mid, l, depth + 1) + self(self, g, mid, hi, r, depth + 1);
  };
  for (int k : {0, 1, 7, 40}) {
    double want = 0.0;
    for (const auto& p : a.pieces) {
      auto g = [&](double u) { return u > 0 ? phi(k, 0.0, u) : 0.0; };
      const double lo = p.box.lo[0], hi = p.box.hi[0];
      const double whole = (hi - lo) / 6.0 * (g(lo) + 4 * g(0.5 * (lo + hi)) + g(hi));
      want += p.value * simpson(simpson, g, lo, hi, whole, 0);
    }
    CHECK(inner_product_plus(a.as_function(), k, 0.0).value == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("projection matches individual inner products") {
  Function1D f;
  f.eval = [](double u) { return std::exp(-u * u) * std::cos(u); };
  f.decay_rate = 1.0;
  const Projection p = project_halfline(f, 0.3, 20);
  CHECK(p.converged);
  for (int k : {0, 5, 20}) CHECK(p.coefficients[k] == doctest::Approx(inner_product_plus(f, k, 0.3).value));
}

TEST_CASE("orthonormality defect is small") {
  for (double a : {-0.5, 0.7}) CHECK(orthonormality_defect(a, 32).max_defect < 1e-10);
}
