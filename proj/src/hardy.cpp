#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "hardylab/errors.hpp"
#include "hardylab/hardy.hpp"
#include "hardylab/parallel.hpp"

namespace hardylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double floored(double v) { return std::abs(v) < kCoefficientFloor ? 0.0 : std::abs(v); }

// Level sums of |c_{n_1}| ... |c_{n_d}| over |n| = m, m <= n_max.
std::vector<double> convolution_power(const std::vector<std::vector<double>>& factors, int n_max) {
  std::vector<double> acc(factors.front().begin(), factors.front().begin() + n_max + 1);
  for (std::size_t i = 1; i < factors.size(); ++i) {
    std::vector<double> next(n_max + 1, 0.0);
    for (int m = 0; m <= n_max; ++m)
      for (int j = 0; j <= m; ++j) next[m] += acc[j] * factors[i][m - j];
    acc = std::move(next);
  }
  return acc;
}

std::vector<int> flag_levels(const Projection& p, const QuadSpec& spec) {
  std::vector<int> out;
  if (p.converged) return out;
  for (std::size_t k = 0; k < p.errors.size(); ++k)
    if (p.errors[k] > std::max(spec.abs_tol, spec.rel_tol * std::abs(p.coefficients[k])))
      out.push_back(static_cast<int>(k));
  return out;
}

TailFit fit_tail(const std::vector<double>& level_sums) {
  TailFit fit;
  const int n = static_cast<int>(level_sums.size()) - 1;
  if (n < 2) return fit;
  const int lo = std::max(1, (n + 1) / 2);
  std::vector<double> x;
  std::vector<double> y;
  for (int m = lo; m <= n; ++m)
    if (level_sums[m] > 0.0) {
      x.push_back(m + 1.0);
      y.push_back(level_sums[m]);
    }
  fit.points = x.size();
  fit.density = static_cast<double>(x.size()) / static_cast<double>(n - lo + 1);
  if (x.empty()) return fit;
  fit.exponent = x.size() >= 2 ? -fit_loglog_slope(x, y).slope : 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) fit.constant = std::max(fit.constant, y[i] * std::pow(x[i], fit.exponent));
  return fit;
}

double tail_from_fit(const TailFit& fit, int n, double E) {
  if (fit.points == 0) return 0.0;
  const double q = fit.exponent + E;
  if (!(q > 1.0)) return kInf;
  return fit.density * fit.constant * std::pow(n + 1.0, 1.0 - q) / (q - 1.0);
}

void check_exponent(double E) {
  if (!(E > 0.0)) throw DomainError("hardy_sum: E must be positive");
}

}  // namespace

void enumerate_level(std::size_t dim, int m, const std::function<void(const MultiIndex&)>& visit) {
  if (dim < 1) throw ContractError("enumerate_level: dim must be >= 1");
  if (m < 0) return;
  std::vector<int> n(dim, 0);
  // Recursive fill: coordinate i takes 0..rest, the last one takes the remainder.
  std::function<void(std::size_t, int)> fill = [&](std::size_t i, int rest) {
    if (i + 1 == dim) {
      n[i] = rest;
      visit(MultiIndex(n));
      return;
    }
    for (int v = 0; v <= rest; ++v) {
      n[i] = v;
      fill(i + 1, rest - v);
    }
  };
  fill(0, m);
}

HardyReport hardy_sum_from_level_sums(std::vector<double> level_sums, double E, std::size_t dim) {
  check_exponent(E);
  HardyReport r;
  r.E = E;
  r.dim = dim;
  double s = 0.0;
  for (std::size_t m = 0; m < level_sums.size(); ++m) {
    if (level_sums[m] < kCoefficientFloor) level_sums[m] = 0.0;
    // Plain accumulation of nonnegative terms keeps S_N monotone.
    s += level_sums[m] / std::pow(static_cast<double>(m) + 1.0, E);
    r.N.push_back(static_cast<int>(m));
    r.partial_sums.push_back(s);
  }
  r.level_sums = std::move(level_sums);
  r.tail_fit = fit_tail(r.level_sums);
  r.tail_estimate = r.level_sums.size() >= 3 ? tail_from_fit(r.tail_fit, static_cast<int>(r.level_sums.size()) - 1, E) : kInf;
  return r;
}

HardyReport hardy_sum_from_levels(const std::vector<std::vector<double>>& levels, double E, std::size_t dim) {
  std::vector<double> sums;
  sums.reserve(levels.size());
  for (const auto& level : levels) {
    std::vector<double> mags;
    mags.reserve(level.size());
    for (double c : level) mags.push_back(floored(c));
    sums.push_back(pairwise_sum(mags));
  }
  return hardy_sum_from_level_sums(std::move(sums), E, dim);
}

HardyReport hardy_sum(const Function1D& f, double alpha, double E, int n_max, const QuadSpec& spec) {
  check_exponent(E);
  const Projection p = project_halfline(f, alpha, n_max, spec);
  std::vector<double> sums;
  for (double c : p.coefficients) sums.push_back(floored(c));
  HardyReport r = hardy_sum_from_level_sums(std::move(sums), E, 1);
  r.unconverged_levels = flag_levels(p, spec);
  return r;
}

HardyReport hardy_sum(const SeparableFunction& f, const Alpha& alpha, double E, int n_max, const QuadSpec& spec) {
  check_exponent(E);
  if (f.factors.size() != alpha.dim() || f.factors.empty())
    throw ContractError("hardy_sum: dimension mismatch");
  std::vector<std::vector<double>> mags;
  std::vector<int> flagged;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    const Projection p = project_halfline(f.factors[i], alpha[i], n_max, spec);
    std::vector<double> m;
    for (double c : p.coefficients) m.push_back(std::abs(c));
    mags.push_back(std::move(m));
    for (int k : flag_levels(p, spec)) flagged.push_back(k);
  }
  HardyReport r = hardy_sum_from_level_sums(convolution_power(mags, n_max), E, alpha.dim());
  std::sort(flagged.begin(), flagged.end());
  flagged.erase(std::unique(flagged.begin(), flagged.end()), flagged.end());
  r.unconverged_levels = std::move(flagged);
  return r;
}

HardyReport hardy_sum(const FunctionNdInfo& f, const Alpha& alpha, double E, int n_max, const QuadSpec& spec) {
  check_exponent(E);
  if (f.dim != alpha.dim()) throw ContractError("hardy_sum: dimension mismatch");
  std::vector<MultiIndex> indices;
  std::vector<int> level_of;
  for (int m = 0; m <= n_max; ++m)
    enumerate_level(f.dim, m, [&](const MultiIndex& n) {
      indices.push_back(n);
      level_of.push_back(m);
    });
  std::vector<QuadResult> results(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) { results[i] = inner_product_plus(f, indices[i], alpha, spec); });
  std::vector<std::vector<double>> levels(n_max + 1);
  std::vector<int> flagged;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    levels[level_of[i]].push_back(results[i].value);
    if (!results[i].converged && (flagged.empty() || flagged.back() != level_of[i])) flagged.push_back(level_of[i]);
  }
  HardyReport r = hardy_sum_from_levels(levels, E, f.dim);
  r.unconverged_levels = std::move(flagged);
  return r;
}

HardyReport hardy_sum(const Atom& a, const Alpha& alpha, double E, int n_max, const QuadSpec& spec) {
  check_exponent(E);
  if (a.kind != AtomKind::HalfSpace) throw ContractError("hardy_sum: half-space atoms only");
  if (alpha.dim() != a.dim) throw ContractError("hardy_sum: dimension mismatch");
  if (a.dim == 1) return hardy_sum(a.as_function(), alpha[0], E, n_max, spec);
  if (!a.factor.empty()) {
    Atom one;
    one.pieces = a.factor;
    const Function1D f1 = one.as_function();
    std::vector<std::vector<double>> mags;
    std::vector<int> flagged;
    for (std::size_t i = 0; i < a.dim; ++i) {
      const Projection p = project_halfline(f1, alpha[i], n_max, spec);
      std::vector<double> m;
      for (double c : p.coefficients) m.push_back(std::abs(c));
      mags.push_back(std::move(m));
      for (int k : flag_levels(p, spec)) flagged.push_back(k);
    }
    std::vector<double> sums = convolution_power(mags, n_max);
    for (double& s : sums) s /= a.normalization;
    HardyReport r = hardy_sum_from_level_sums(std::move(sums), E, a.dim);
    std::sort(flagged.begin(), flagged.end());
    flagged.erase(std::unique(flagged.begin(), flagged.end()), flagged.end());
    r.unconverged_levels = std::move(flagged);
    return r;
  }
  FunctionNdInfo g;
  g.dim = a.dim;
  g.eval = [a](std::span<const double> x) { return a(x); };
  for (const auto& p : a.pieces)
    for (double h : p.box.hi) g.support_hi = std::isfinite(g.support_hi) ? std::max(g.support_hi, h) : h;
  return hardy_sum(g, alpha, E, n_max, spec);
}

HardyReport hardy_sum_hermite(const Function1D& f, double lambda, double E, int n_max, const QuadSpec& spec) {
  check_exponent(E);
  const Projection p = project_line(f, lambda, n_max, spec);
  std::vector<double> sums;
  for (double c : p.coefficients) sums.push_back(floored(c));
  HardyReport r = hardy_sum_from_level_sums(std::move(sums), E, 1);
  r.unconverged_levels = flag_levels(p, spec);
  return r;
}

HardyReport converge_hardy_sum(const std::function<HardyReport(int)>& at, double rel_tail, int n_start, int n_cap) {
  if (n_start < 2 || n_cap < n_start) throw ContractError("converge_hardy_sum: need 2 <= n_start <= n_cap");
  if (!(rel_tail > 0.0)) throw ContractError("converge_hardy_sum: rel_tail must be positive");
  int n = n_start;
  while (true) {
    HardyReport r = at(n);
    if (r.tail_estimate <= rel_tail * r.total() || n > n_cap / 2) return r;
    n *= 2;
  }
}

HardyReport hardy_sum_hermite_converged(const Function1D& f, double lambda, double E, double rel_tail, int n_start,
                                        int n_cap, const QuadSpec& spec) {
  return converge_hardy_sum([&](int n) { return hardy_sum_hermite(f, lambda, E, n, spec); }, rel_tail, n_start,
                            n_cap);
}

std::vector<int> parse_k_grid(const std::string& text) {
  auto number = [&](std::string_view s, auto& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
      throw ContractError("K-grid: cannot parse '" + std::string(s) + "'");
  };
  const auto first = text.find(':');
  if (first == std::string::npos) {
    int k = 0;
    number(text, k);
    if (k < 1) throw ContractError("K-grid: values must be >= 1");
    return {k};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos || second + 1 >= text.size() || text[second + 1] != 'x')
    throw ContractError("K-grid: expected start:stop:x<factor>");
  int start = 0;
  int stop = 0;
  double factor = 0.0;
  number(std::string_view(text).substr(0, first), start);
  number(std::string_view(text).substr(first + 1, second - first - 1), stop);
  number(std::string_view(text).substr(second + 2), factor);
  if (start < 1 || stop < start) throw ContractError("K-grid: need 1 <= start <= stop");
  if (!(factor > 1.0)) throw ContractError("K-grid: factor must exceed 1");
  std::vector<int> grid;
  for (double v = start; v <= stop * (1.0 + 1e-12); v *= factor) {
    const int k = static_cast<int>(std::lround(v));
    if (grid.empty() || k != grid.back()) grid.push_back(k);
  }
  return grid;
}

HardyReport sharpness_experiment(const SharpnessOptions& opt) {
  if (!(opt.epsilon > 0.0 && opt.epsilon <= 0.25)) throw DomainError("sharpness: epsilon must lie in (0, 1/4]");
  if (!(opt.alpha > -0.5)) throw DomainError("sharpness: alpha must be > -1/2");
  if (opt.dim < 1) throw ContractError("sharpness: dim must be >= 1");
  if (opt.K_grid.empty()) throw ContractError("sharpness: empty K-grid");
  for (std::size_t i = 0; i < opt.K_grid.size(); ++i)
    if (opt.K_grid[i] < 1 || (i > 0 && opt.K_grid[i] <= opt.K_grid[i - 1]))
      throw ContractError("sharpness: K-grid must be positive and increasing");
  if (opt.K_grid.size() > 1 && opt.K_grid.size() < 4) throw FitError("sharpness: slope fit needs at least 4 K values");
  if (opt.tail_horizon < 2) throw ContractError("sharpness: tail_horizon must be >= 2");

  const BoundConstants bc = fit_bound_constants(opt.alpha, opt.bound_k_max);
  const double delta = opt.delta ? *opt.delta : default_delta(bc);
  const double d = static_cast<double>(opt.dim);
  const double E = 0.75 * d - opt.epsilon;
  const double E_control = 0.75 * d;

  HardyReport report;
  report.E = E;
  report.dim = opt.dim;
  report.delta = delta;
  report.bounds = bc;
  report.K_sweep.resize(opt.K_grid.size());
  std::vector<HardyReport> runs(opt.K_grid.size());

  parallel_for(opt.K_grid.size(), [&](std::size_t i) {
    const int K = opt.K_grid[i];
    // Past N = K the coefficients only settle into their oscillatory decay
    // after roughly 16K, so the tail fit needs a long horizon. Level sums in
    // d > 1 come from a quadratic-cost convolution, so the horizon is capped.
    const int horizon = (opt.dim == 1 ? opt.tail_horizon : std::min(opt.tail_horizon, 4)) * K;
    const Atom a = make_counterexample_atom({K, delta, bc.c, opt.alpha});
    const Projection p = atom_coefficients(a, opt.alpha, horizon, opt.quad);
    std::vector<double> mags;
    for (double c : p.coefficients) mags.push_back(std::abs(c));
    std::vector<double> levels = opt.dim == 1 ? mags : convolution_power(std::vector(opt.dim, mags), horizon);
    const double norm = cube_ball_ratio(opt.dim);
    for (double& v : levels) v /= norm;

    KSample s;
    s.K = K;
    s.N = K;
    s.E = E;
    const HardyReport main = hardy_sum_from_level_sums(levels, E, opt.dim);
    const HardyReport control = hardy_sum_from_level_sums(levels, E_control, opt.dim);
    s.partial_sum = main.partial_sums[K];
    s.tail_estimate = (main.total() - s.partial_sum) + main.tail_estimate;
    s.control_sum = control.partial_sums[K];
    s.control_tail = (control.total() - s.control_sum) + control.tail_estimate;
    s.min_lower_ratio = kInf;
    const double scale = std::pow(static_cast<double>(K), -0.5 * opt.alpha - 0.25);
    for (int k = 1; k <= K; ++k) {
      const double ratio = p.coefficients[k] / (std::pow(static_cast<double>(k), 0.5 * opt.alpha) * scale);
      s.min_lower_ratio = std::min(s.min_lower_ratio, ratio);
      if (!(p.coefficients[k] > 0.0)) s.all_positive = false;
    }
    report.K_sweep[i] = s;
    HardyReport truncated = hardy_sum_from_level_sums(std::vector<double>(levels.begin(), levels.begin() + K + 1), E, opt.dim);
    truncated.tail_estimate = s.tail_estimate;
    truncated.unconverged_levels = flag_levels(p, opt.quad);
    runs[i] = std::move(truncated);
  });

  // Partial sums of the largest K are kept as the report's own series.
  const HardyReport& last = runs.back();
  report.N = last.N;
  report.partial_sums = last.partial_sums;
  report.level_sums = last.level_sums;
  report.tail_estimate = last.tail_estimate;
  report.tail_fit = last.tail_fit;
  report.unconverged_levels = last.unconverged_levels;

  if (opt.K_grid.size() >= 4) {
    std::vector<double> ks;
    std::vector<double> sums;
    for (const auto& s : report.K_sweep) {
      ks.push_back(s.K);
      sums.push_back(s.partial_sum);
    }
    report.fitted_slope = fit_loglog_slope(ks, sums);
  }
  double hi = 0.0;
  double lo = kInf;
  for (std::size_t i = report.K_sweep.size() / 2; i < report.K_sweep.size(); ++i) {
    hi = std::max(hi, report.K_sweep[i].control_sum);
    lo = std::min(lo, report.K_sweep[i].control_sum);
  }
  report.control_spread = hi / lo;
  return report;
}

namespace {

QuadSpec tight(QuadSpec spec) {
  // The alpha = -1/2 coefficients are O(K^{-1}); ask for absolute accuracy
  // well below that.
  spec.abs_tol = std::min(spec.abs_tol, 1e-13);
  return spec;
}

Atom halfinteger_atom(int K, double delta) {
  const BoundConstants bc = fit_bound_constants(-0.5, 256, true);
  return make_counterexample_atom({K, delta, bc.c, -0.5});
}

}  // namespace

double halfinteger_coefficient_check(int K, double delta, int k) {
  if (k < 1) throw ContractError("halfinteger_coefficient_check: k must be >= 1");
  if (k > K) throw ContractError("halfinteger_coefficient_check: k must be <= K");
  const Atom a = halfinteger_atom(K, delta);
  const QuadResult q = inner_product_plus(a.as_function(), k, -0.5, tight({}));
  return -q.value / (std::pow(static_cast<double>(k), 0.75) / K);
}

HalfIntegerReport halfinteger_sweep(int K, double delta, const QuadSpec& spec) {
  if (K < 1) throw ContractError("halfinteger_sweep: K must be >= 1");
  const Atom a = halfinteger_atom(K, delta);
  const Projection p = atom_coefficients(a, -0.5, K, tight(spec));
  HalfIntegerReport r;
  r.K = K;
  r.delta = delta;
  r.c = fit_bound_constants(-0.5, 256, true).c;
  r.min_ratio = kInf;
  for (int k = 1; k <= K; ++k) {
    const double ratio = -p.coefficients[k] / (std::pow(static_cast<double>(k), 0.75) / K);
    r.ratios.push_back(ratio);
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.argmin = k;
    }
  }
  return r;
}

ParityCheckReport parity_check(int K, double E, double delta, const QuadSpec& spec) {
  if (K < 1) throw ContractError("parity_check: K must be >= 1");
  check_exponent(E);
  const Atom a = halfinteger_atom(K, delta);
  const Function1D even = symmetric_extension(a, ParityVector{0}).as_function();
  const int n = K;
  const Projection lag = atom_coefficients(a, -0.5, n, tight(spec));
  const Projection her = project_line(even, 0.0, 2 * n, tight(spec));
  ParityCheckReport r;
  r.K = K;
  r.N = n;
  r.E = E;
  r.lower = std::pow(2.0, -E);
  std::vector<double> h_terms;
  std::vector<double> l_terms;
  for (int k = 0; k <= n; ++k) {
    const double h = std::abs(her.coefficients[2 * k]);
    const double l = std::abs(lag.coefficients[k]);
    h_terms.push_back(h / std::pow(2.0 * k + 1.0, E));
    l_terms.push_back(l / std::pow(k + 1.0, E));
    r.max_coefficient_mismatch = std::max(r.max_coefficient_mismatch, std::abs(h - std::numbers::sqrt2 * l));
  }
  r.hermite_sum = pairwise_sum(h_terms);
  r.laguerre_sum = pairwise_sum(l_terms);
  r.ratio = r.hermite_sum / (std::numbers::sqrt2 * r.laguerre_sum);
  return r;
}

}  // namespace hardylab
