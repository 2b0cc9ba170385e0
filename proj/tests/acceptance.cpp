// Acceptance run: one PASS/FAIL line per criterion with the measured numbers.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hardylab/bases.hpp"
#include "hardylab/hardy.hpp"
#include "hardylab/kernels.hpp"
#include "hardylab/quadrature.hpp"

using namespace hardylab;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double time_limit_s, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > time_limit_s) {
    v.pass = false;
    v.detail += fmt(" [over time limit %.0f s]", time_limit_s);
  }
  if (!v.pass) ++failures;
  std::printf("[%s] criterion %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

constexpr double kUnlimited = std::numeric_limits<double>::infinity();

Verdict orthonormality() {
  double worst = 0.0;
  std::string per;
  for (double a : {-0.5, -0.3, 0.0, 0.7, 2.0}) {
    const double d = orthonormality_defect(a, 128).max_defect;
    worst = std::max(worst, d);
    per += fmt(" a=%g:%.1e", a, d);
  }
  return {worst <= 1e-8, fmt("max defect %.2e <= 1e-8;", worst) + per};
}

Verdict mehler_identity() {
  double worst = 0.0;
  int max_terms = 0;
  for (double a : {-0.5, 0.0, 1.0})
    for (double r : {0.3, 0.6, 0.9})
      for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
          const double u = 0.1 + 4.9 * i / 19, v = 0.1 + 4.9 * j / 19;
          const KernelParams p(a, r);
          const SeriesValue s = kernel_series_auto(p, u, v, 1e-10);
          worst = std::max(worst, std::abs(kernel_closed(p, u, v) - s.value));
          max_terms = std::max(max_terms, s.terms);
        }
  return {worst <= 1e-8, fmt("max |closed - series| %.2e <= 1e-8, series length up to %d", worst, max_terms)};
}

// Relative error is taken against max(|phi'|, 1% of the largest |phi'| for
// that k on the grid), so zeros of phi' do not turn rounding into failures.
Verdict derivative_recurrence() {
  double worst = 0.0;
  for (double a : {-0.5, 0.3, 1.5})
    for (int k = 0; k <= 50; ++k) {
      std::vector<double> u, d;
      for (int i = 0; i <= 240; ++i) u.push_back(0.1 + 5.9 * i / 240);
      double scale = 0.0;
      for (double x : u) {
        d.push_back(phi_derivative(k, a, x));
        scale = std::max(scale, std::abs(d.back()));
      }
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, u[i]);
        const double fd = (phi(k, a, u[i] + h) - phi(k, a, u[i] - h)) / (2 * h);
        worst = std::max(worst, std::abs(d[i] - fd) / std::max(std::abs(d[i]), 1e-2 * scale));
      }
    }
  return {worst <= 1e-5, fmt("max relative error vs central differences %.2e <= 1e-5", worst)};
}

Verdict reproducing() {
  double worst = 0.0;
  for (double a : {-0.5, 0.0, 1.0})
    for (double r : {0.3, 0.7})
      for (int k = 0; k <= 20; ++k)
        for (double u : {0.2, 0.9, 1.7, 3.5}) {
          const KernelParams p(a, r);
          const double got = kernel_apply_basis(p, k, u).value;
          worst = std::max(worst, std::abs(got - std::pow(r, k) * phi(k, a, u)));
        }
  return {worst <= 1e-7, fmt("max |int R phi_k - r^k phi_k| %.2e <= 1e-7", worst)};
}

Verdict sweep_verdict(const std::vector<BoundCheckReport>& reports) {
  bool ok = true;
  std::string detail;
  for (const auto& b : reports) {
    const bool good = std::isfinite(b.max_ratio) && b.bounded();
    ok = ok && good;
    detail += fmt(" %s slope %.3f (max ratio %.3g)%s;", b.name.c_str(), b.slope.slope, b.max_ratio, good ? "" : " FAILED");
  }
  return {ok, "slopes <= 0.05:" + detail};
}

Verdict kernel_difference() {
  std::vector<BoundCheckReport> r;
  for (double a : {-0.3, 0.0, 0.3}) r.push_back(kernel_difference_sweep(a));
  return sweep_verdict(r);
}

Verdict basis_and_weighted_sweeps() {
  std::vector<BoundCheckReport> r;
  for (double a : {-0.3, 0.0, 0.3}) {
    r.push_back(basis_difference_sweep(a));
    r.push_back(kernel_weighted_norm_sweep(a));
  }
  return sweep_verdict(r);
}

Verdict sharpness() {
  SharpnessOptions opt;
  opt.alpha = 0.0;
  opt.epsilon = 0.25;
  opt.K_grid = parse_k_grid("16:4096:x2");
  const HardyReport h = sharpness_experiment(opt);
  const double s = h.fitted_slope.slope;
  const bool slope_ok = s >= 0.8 * opt.epsilon && s <= 1.2 * opt.epsilon;
  const bool control_ok = h.control_spread <= 2.0;
  return {slope_ok && control_ok,
          fmt("slope %.3f +- %.3f in [%.2f, %.2f]; control spread %.3f <= 2; delta %.3g", s, h.fitted_slope.half_width,
              0.8 * opt.epsilon, 1.2 * opt.epsilon, h.control_spread, h.delta)};
}

Verdict half_integer() {
  std::vector<double> mins;
  bool positive = true;
  std::string detail;
  for (int K : {64, 256, 1024}) {
    const HalfIntegerReport r = halfinteger_sweep(K);
    mins.push_back(r.min_ratio);
    positive = positive && r.min_ratio > 0.0;
    detail += fmt(" K=%d min %.5f;", K, r.min_ratio);
  }
  const double mean = std::accumulate(mins.begin(), mins.end(), 0.0) / mins.size();
  double dev = 0.0;
  for (double m : mins) dev = std::max(dev, std::abs(m / mean - 1.0));
  return {positive && dev <= 0.5, fmt("max deviation from mean %.3f <= 0.5;", dev) + detail};
}

Verdict lambda_zero() {
  double herm = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double u = -8.0 + 16.0 * i / 200;
    std::vector<double> h(41);
    h[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * u * u);
    h[1] = std::sqrt(2.0) * u * h[0];
    for (int n = 1; n < 40; ++n) h[n + 1] = std::sqrt(2.0 / (n + 1)) * u * h[n] - std::sqrt(double(n) / (n + 1)) * h[n - 1];
    for (int n = 0; n <= 40; ++n) herm = std::max(herm, std::abs(gen_hermite(n, 0.0, u) - h[n]));
  }

  std::vector<std::function<double(double)>> tests = {
      [](double u) { return std::exp(-u * u); },
      [](double u) { return std::exp(-(u - 0.7) * (u - 0.7)); },
      [](double u) { return u * std::exp(-0.5 * u * u) * std::cos(2 * u); },
      [](double u) { return std::exp(-0.8 * u * u) / (1 + u * u); },
      [](double u) { return (1 + u + u * u * u) * std::exp(-1.5 * (u + 0.2) * (u + 0.2)); },
  };
  const std::vector<double> decay = {1.0, 0.9, 0.5, 0.8, 1.4};
  double coef = 0.0;
  const int kmax = 20;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    Function1D f, even, odd;
    f.eval = tests[t];
    even.eval = [g = tests[t]](double u) { return 0.5 * (g(u) + g(-u)); };
    odd.eval = [g = tests[t]](double u) { return 0.5 * (g(u) - g(-u)); };
    f.decay_rate = even.decay_rate = odd.decay_rate = decay[t];
    const Projection line = project_line(f, 0.0, 2 * kmax + 1);
    const Projection pe = project_halfline(even, -0.5, kmax);
    const Projection po = project_halfline(odd, 0.5, kmax);
    for (int k = 0; k <= kmax; ++k) {
      const double s = (k % 2 ? -1.0 : 1.0) * std::sqrt(2.0);
      coef = std::max(coef, std::abs(line.coefficients[2 * k] - s * pe.coefficients[k]));
      coef = std::max(coef, std::abs(line.coefficients[2 * k + 1] - s * po.coefficients[k]));
    }
  }
  return {herm <= 1e-10 && coef <= 1e-8,
          fmt("Hermite functions n<=40 max diff %.2e <= 1e-10; coefficient identity on 5 functions %.2e <= 1e-8", herm,
              coef)};
}

Verdict parity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  double worst = 0.0;
  int evaluations = 0;
  for (std::size_t dim = 1; dim <= 3; ++dim)
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> c(dim + 2);
      for (double& ci : c) ci = d(rng);
      FunctionNd f = [c](std::span<const double> x) {
        double s = c[0];
        for (std::size_t i = 0; i < x.size(); ++i) s += c[i + 1] * x[i] + std::sin((i + 2) * x[i] * c.back());
        return std::exp(-0.25 * s * s) + s * s * s;
      };
      for (int p = 0; p < 50; ++p) {
        std::vector<double> x(dim);
        for (double& xi : x) xi = d(rng);
        double sum = 0.0;
        for (const auto& eta : ParityVector::all(dim)) sum += parity_component(f, eta)(x);
        // Rounding scale: the largest |f(eps x)| entering the components.
        double mag = 0.0;
        for (const auto& eps : SignVector::all(dim)) {
          std::vector<double> y(x);
          for (std::size_t i = 0; i < dim; ++i) y[i] *= eps[i];
          mag = std::max(mag, std::abs(f(y)));
        }
        worst = std::max(worst, std::abs(sum - f(x)) / (mag * std::numeric_limits<double>::epsilon()));
        ++evaluations;
      }
    }
  return {worst <= 16.0, fmt("max |sum_eta f_eta - f| = %.1f ulp of max|f(eps x)| (<= 16) over %d points", worst,
                             evaluations)};
}

Verdict l1_direction() {
  struct Case {
    const char* name;
    Function1D f;
  };
  std::vector<Case> cases(3);
  cases[0].name = "|u|^-1/2 on (-1,1)";
  cases[0].f.eval = [](double u) {
    const double a = std::abs(u);
    return a > 0.0 && a < 1.0 ? 1.0 / std::sqrt(a) : 0.0;
  };
  cases[0].f.support_lo = -1.0;
  cases[0].f.support_hi = 1.0;
  cases[0].f.singular_points = {0.0};
  cases[1].name = "indicator (-1/2,1)";
  cases[1].f.eval = [](double u) { return u > -0.5 && u < 1.0 ? 1.0 : 0.0; };
  cases[1].f.support_lo = -0.5;
  cases[1].f.support_hi = 1.0;
  cases[1].f.jumps = {-0.5, 1.0};
  cases[2].name = "sgn(u)|u|^-1/4 e^-u^2";
  cases[2].f.eval = [](double u) { return u == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(u), -0.25), u) * std::exp(-u * u); };
  cases[2].f.decay_rate = 1.0;
  cases[2].f.singular_points = {0.0};

  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const HardyReport h = hardy_sum_hermite_converged(c.f, 0.0, 0.85, 0.01);
    const double rel = h.tail_estimate / h.total();
    ok = ok && rel < 0.01;
    detail += fmt(" %s: N=%d sum %.4f tail/sum %.4f;", c.name, h.N.back(), h.total(), rel);
  }
  return {ok, "E = 0.85, tail < 1% of sum:" + detail};
}

}  // namespace

int main() {
  criterion(1, "orthonormality", 120, orthonormality);
  criterion(2, "closed kernel = series", 60, mehler_identity);
  criterion(3, "derivative recurrence", kUnlimited, derivative_recurrence);
  criterion(4, "reproducing property", kUnlimited, reproducing);
  criterion(5, "kernel difference sweep", kUnlimited, kernel_difference);
  criterion(6, "basis difference and weighted norm sweeps", kUnlimited, basis_and_weighted_sweeps);
  criterion(7, "sharpness slope", 600, sharpness);
  criterion(8, "alpha = -1/2 lower bound", kUnlimited, half_integer);
  criterion(9, "lambda = 0 reduction", kUnlimited, lambda_zero);
  criterion(10, "parity decomposition", kUnlimited, parity);
  criterion(11, "L1 direction convergence", kUnlimited, l1_direction);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
