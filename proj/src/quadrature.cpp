#include "hardylab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "hardylab/errors.hpp"
#include "hardylab/parallel.hpp"

namespace hardylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(-45) ~ 3e-20: Gaussian truncation depth.
constexpr double kGaussianDepth = 45.0;
// Depth of the initial geometric grading toward singular points.
constexpr int kInitialGrading = 24;
// Panel orders used on tiny graded panels of the vector rules.
constexpr int kGradedOrder = 16;
constexpr int kGradedOrderLow = 10;

struct Panel {
  double a;
  double b;
  int singular_side = 0;  // -1: singular at a, +1: singular at b
};

template <typename F>
double gauss_panel(const F& g, double a, double b, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(mid + half * rule.nodes[i]);
  return s * half;
}

double truncation_radius(const Function1D& g, const QuadSpec& spec) {
  if (spec.truncation_radius > 0.0) return std::min(spec.truncation_radius, g.support_hi);
  if (std::isfinite(g.support_hi)) return g.support_hi;
  if (g.decay_rate > 0.0) return std::sqrt(kGaussianDepth / g.decay_rate);
  throw ContractError("quadrature: integrand on an unbounded domain needs decay metadata");
}

double gaussian_tail(double magnitude_at_r, double r, double rate) {
  if (!(rate > 0.0) || r <= 0.0) return 0.0;
  return magnitude_at_r / (2.0 * rate * r);
}

// Sorted, deduplicated points of `points` strictly inside (lo, hi).
std::vector<double> interior(std::span<const double> points, double lo, double hi) {
  std::vector<double> out;
  for (double p : points)
    if (p > lo && p < hi) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool contains(std::span<const double> sorted, double x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

// Splits [lo, hi] at all breakpoints, grades geometrically toward singular
// endpoints and cuts the rest into uniform panels of width <= width.
// Graded panels are returned separately (ordered from the singular point
// outward) when `graded` is non-null.
struct Layout {
  std::vector<Panel> regular;
  // One entry per singular endpoint: the outermost graded zone [s, s+dir*g].
  struct Zone {
    double s;
    double extent;  // signed: zone is between s and s + extent
  };
  std::vector<Zone> zones;
};

Layout make_layout(double lo, double hi, std::span<const double> singular_sorted,
                   std::span<const double> jumps, double width) {
  std::vector<double> cuts = {lo, hi};
  for (double p : interior(singular_sorted, lo, hi)) cuts.push_back(p);
  for (double p : interior(jumps, lo, hi)) cuts.push_back(p);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Layout layout;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i];
    double b = cuts[i + 1];
    const bool sing_a = contains(singular_sorted, a);
    const bool sing_b = contains(singular_sorted, b);
    const double len = b - a;
    const double zone = std::min(width, (sing_a && sing_b) ? 0.5 * len : len);
    if (sing_a) {
      layout.zones.push_back({a, zone});
      a += zone;
    }
    if (sing_b) {
      layout.zones.push_back({b, -zone});
      b -= zone;
    }
    if (b - a > 1e-15 * std::max(1.0, std::abs(b))) {
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
      for (int j = 0; j < pieces; ++j)
        layout.regular.push_back({a + (b - a) * j / pieces, a + (b - a) * (j + 1) / pieces});
    }
  }
  return layout;
}

struct AdaptivePanel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  int singular_side;
};

// Global adaptive refinement over an initial panel list.
QuadResult adaptive(const std::function<double(double)>& g, std::vector<Panel> initial,
                    const QuadSpec& spec) {
  const int order = spec.panel_order;
  std::size_t evaluations = 0;
  auto evaluate = [&](double a, double b, int depth, int singular_side) {
    const double m = 0.5 * (a + b);
    const double whole = gauss_panel(g, a, b, order);
    const double left = gauss_panel(g, a, m, order);
    const double right = gauss_panel(g, m, b, order);
    const double halves = left + right;
    evaluations += 3 * static_cast<std::size_t>(order);
    double err = std::abs(whole - halves) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(halves);
    // Next to a singular point the difference of two rules undershoots; the
    // mass of the half touching the singularity bounds what is unresolved.
    if (singular_side < 0) err += std::abs(left);
    if (singular_side > 0) err += std::abs(right);
    return AdaptivePanel{a, b, halves, err, depth, singular_side};
  };

  std::vector<AdaptivePanel> panels;
  panels.reserve(initial.size());
  for (const auto& p : initial) panels.push_back(evaluate(p.a, p.b, 0, p.singular_side));

  auto cmp = [&](std::size_t i, std::size_t j) {
    if (panels[i].error != panels[j].error) return panels[i].error < panels[j].error;
    return i > j;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> queue(cmp);
  for (std::size_t i = 0; i < panels.size(); ++i) queue.push(i);

  constexpr std::size_t kMaxPanels = 200000;
  auto totals = [&] {
    std::vector<AdaptivePanel> sorted = panels;
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    std::vector<double> values(sorted.size());
    std::vector<double> errors(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      values[i] = sorted[i].value;
      errors[i] = sorted[i].error;
    }
    return std::pair{pairwise_sum(values), pairwise_sum(errors)};
  };

  auto [value, error] = totals();
  bool converged = true;
  std::size_t since_check = 0;
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    if (queue.empty() || panels.size() >= kMaxPanels) {
      converged = false;
      break;
    }
    const std::size_t worst = queue.top();
    queue.pop();
    const AdaptivePanel p = panels[worst];
    if (p.depth >= spec.max_depth) {
      // Panel cannot be refined further; its error stays in the total.
      if (queue.empty() || panels[queue.top()].error <= 0.0) {
        converged = false;
        break;
      }
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    panels[worst] = evaluate(p.a, m, p.depth + 1, p.singular_side < 0 ? -1 : 0);
    panels.push_back(evaluate(m, p.b, p.depth + 1, p.singular_side > 0 ? 1 : 0));
    queue.push(worst);
    queue.push(panels.size() - 1);
    error += panels[worst].error + panels.back().error - p.error;
    value += panels[worst].value + panels.back().value - p.value;
    if (++since_check >= 64) {
      std::tie(value, error) = totals();
      since_check = 0;
    }
  }
  std::tie(value, error) = totals();
  if (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) converged = false;
  QuadResult r;
  r.value = value;
  r.error_estimate = error;
  r.converged = converged;
  r.evaluations = evaluations;
  return r;
}

std::vector<Panel> initial_panels(double lo, double hi, std::span<const double> singular,
                                  std::span<const double> jumps, double width) {
  std::vector<double> sing(singular.begin(), singular.end());
  std::sort(sing.begin(), sing.end());
  Layout layout = make_layout(lo, hi, sing, jumps, width);
  std::vector<Panel> panels = layout.regular;
  for (const auto& zone : layout.zones) {
    double outer = zone.extent;
    for (int j = 0; j < kInitialGrading; ++j) {
      const double inner = 0.5 * outer;
      const double x0 = zone.s + inner;
      const double x1 = zone.s + outer;
      panels.push_back({std::min(x0, x1), std::max(x0, x1)});
      outer = inner;
    }
    const double x0 = zone.s;
    const double x1 = zone.s + outer;
    panels.push_back({std::min(x0, x1), std::max(x0, x1), outer > 0 ? -1 : 1});
  }
  return panels;
}

std::vector<double> with_zero(std::vector<double> points) {
  points.push_back(0.0);
  return points;
}

// ---------------------------------------------------------------------------
// Vector rules: one composite rule shared by all coefficients.

// node_update(u, w, acc) adds w * integrand(u) * basis_k(u) to acc[k].
using NodeUpdate = std::function<void(double, double, std::span<double>)>;

void accumulate_panel(const NodeUpdate& update, double a, double b, int order, std::span<double> acc) {
  const GaussRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    update(mid + half * rule.nodes[i], half * rule.weights[i], acc);
}

struct VectorSums {
  std::vector<double> hi;
  std::vector<double> lo;
  std::vector<double> remainder;  // unresolved mass next to singular points
};

VectorSums vector_integrate(const NodeUpdate& update, std::size_t count, const Layout& layout,
                            int order, double abs_tol) {
  const int order_lo = std::max(2, (2 * order) / 3);
  VectorSums sums{std::vector<double>(count, 0.0), std::vector<double>(count, 0.0),
                  std::vector<double>(count, 0.0)};

  // Regular panels: contributions computed in parallel waves, merged in
  // panel order so the result does not depend on the worker count.
  const std::size_t wave = 4 * thread_count();
  const auto& panels = layout.regular;
  std::vector<std::vector<double>> part_hi(wave, std::vector<double>(count));
  std::vector<std::vector<double>> part_lo(wave, std::vector<double>(count));
  for (std::size_t start = 0; start < panels.size(); start += wave) {
    const std::size_t n = std::min(wave, panels.size() - start);
    parallel_for(n, [&](std::size_t i) {
      std::fill(part_hi[i].begin(), part_hi[i].end(), 0.0);
      std::fill(part_lo[i].begin(), part_lo[i].end(), 0.0);
      const Panel& p = panels[start + i];
      accumulate_panel(update, p.a, p.b, order, part_hi[i]);
      accumulate_panel(update, p.a, p.b, order_lo, part_lo[i]);
    });
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < count; ++k) {
        sums.hi[k] += part_hi[i][k];
        sums.lo[k] += part_lo[i][k];
      }
  }

  // Graded zones: level by level toward the singular point until two
  // consecutive levels contribute below abs_tol / 1000.
  std::vector<double> level_hi(count);
  std::vector<double> level_lo(count);
  for (const auto& zone : layout.zones) {
    double outer = zone.extent;
    int quiet = 0;
    double last = 0.0;
    const double full = std::abs(zone.extent);
    for (int j = 0; j < 200 && quiet < 2; ++j) {
      const double inner = 0.5 * outer;
      const double x0 = std::min(zone.s + inner, zone.s + outer);
      const double x1 = std::max(zone.s + inner, zone.s + outer);
      const bool small = std::abs(outer) < full / 16.0;
      std::fill(level_hi.begin(), level_hi.end(), 0.0);
      std::fill(level_lo.begin(), level_lo.end(), 0.0);
      accumulate_panel(update, x0, x1, small ? kGradedOrder : order, level_hi);
      accumulate_panel(update, x0, x1, small ? kGradedOrderLow : order_lo, level_lo);
      last = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        sums.hi[k] += level_hi[k];
        sums.lo[k] += level_lo[k];
        last = std::max(last, std::abs(level_hi[k]));
      }
      quiet = last < 1e-3 * abs_tol ? quiet + 1 : 0;
      outer = inner;
    }
    // The omitted [s, s + outer] piece: bounded by a few times the last level
    // for any integrable power singularity weaker than |u - s|^{-1/2}.
    for (std::size_t k = 0; k < count; ++k) sums.remainder[k] += 4.0 * last;
  }
  return sums;
}

Projection finish_projection(const VectorSums& s, double tail, const QuadSpec& spec) {
  Projection p;
  p.coefficients = s.hi;
  p.errors.resize(s.hi.size());
  for (std::size_t k = 0; k < s.hi.size(); ++k) {
    p.errors[k] = std::abs(s.hi[k] - s.lo[k]) + s.remainder[k] + tail +
                  4.0 * std::numeric_limits<double>::epsilon() * std::abs(s.hi[k]);
    if (p.errors[k] > std::max(spec.abs_tol, spec.rel_tol * std::abs(s.hi[k]))) p.converged = false;
  }
  return p;
}

double oscillation_width(double nu) { return std::min(1.0, 4.0 * std::numbers::pi / std::sqrt(nu)); }

}  // namespace

void QuadSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ContractError("QuadSpec: tolerances must be positive");
  if (panel_order < 2) throw ContractError("QuadSpec: panel_order must be >= 2");
  if (truncation_radius < 0.0) throw ContractError("QuadSpec: negative truncation radius");
}

double SeparableFunction::operator()(std::span<const double> x) const {
  if (x.size() != factors.size()) throw ContractError("SeparableFunction: dimension mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= factors[i](x[i]);
  return p;
}

Function1D basis_function(int k, double alpha) {
  const double nu = turning_scale(k, alpha);
  Function1D f;
  f.eval = [k, alpha](double u) { return u > 0.0 ? phi(k, alpha, u) : 0.0; };
  f.decay_rate = 0.5;
  f.support_lo = 0.0;
  f.support_hi = std::sqrt(2.0 * nu) + 8.0;
  f.length_scale = oscillation_width(nu);
  return f;
}

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw ContractError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

QuadResult integrate_interval(const std::function<double(double)>& g, double a, double b,
                              const QuadSpec& spec, std::span<const double> breakpoints) {
  spec.validate();
  if (!(std::isfinite(a) && std::isfinite(b))) throw ContractError("integrate_interval: infinite limits");
  if (a == b) return {};
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double width = hi - lo;
  QuadResult r = adaptive(g, initial_panels(lo, hi, {}, breakpoints, width), spec);
  r.value *= sign;
  return r;
}

QuadResult integrate_halfline(const Function1D& g, const QuadSpec& spec) {
  spec.validate();
  const double lo = std::max(0.0, g.support_lo);
  const double hi = truncation_radius(g, spec);
  if (hi <= lo) return {};
  const auto singular = lo == 0.0 ? with_zero(g.singular_points) : g.singular_points;
  QuadResult r = adaptive(g.eval, initial_panels(lo, hi, singular, g.jumps, g.length_scale), spec);
  if (hi < g.support_hi) {
    r.tail_bound = gaussian_tail(std::abs(g(hi)), hi, g.decay_rate);
    r.error_estimate += r.tail_bound;
  }
  return r;
}

QuadResult integrate_line(const Function1D& g, const QuadSpec& spec) {
  Function1D right = g;
  right.support_lo = std::max(0.0, g.support_lo);
  Function1D left = g;
  left.eval = [f = g.eval](double u) { return f(-u); };
  left.support_lo = std::max(0.0, -g.support_hi);
  left.support_hi = -g.support_lo;
  left.singular_points.clear();
  left.jumps.clear();
  for (double p : g.singular_points) left.singular_points.push_back(-p);
  for (double p : g.jumps) left.jumps.push_back(-p);
  QuadResult r1 = integrate_halfline(right, spec);
  QuadResult r2 = integrate_halfline(left, spec);
  QuadResult r;
  r.value = r1.value + r2.value;
  r.error_estimate = r1.error_estimate + r2.error_estimate;
  r.tail_bound = r1.tail_bound + r2.tail_bound;
  r.converged = r1.converged && r2.converged;
  r.evaluations = r1.evaluations + r2.evaluations;
  return r;
}

QuadResult inner_product_plus(const Function1D& f, int k, double alpha, const QuadSpec& spec) {
  const double nu = turning_scale(k, alpha);
  Function1D g = f;
  g.eval = [f, k, alpha](double u) { return u > 0.0 ? f(u) * phi(k, alpha, u) : 0.0; };
  g.support_lo = std::max(0.0, f.support_lo);
  g.support_hi = std::min(f.support_hi, std::sqrt(2.0 * nu) + 8.0);
  g.decay_rate = f.decay_rate + 0.5;
  g.length_scale = std::min(f.length_scale, oscillation_width(nu));
  return integrate_halfline(g, spec);
}

QuadResult inner_product_plus(const SeparableFunction& f, const MultiIndex& n, const Alpha& alpha,
                              const QuadSpec& spec) {
  if (f.factors.size() != n.dim() || n.dim() != alpha.dim())
    throw ContractError("inner_product_plus: dimension mismatch");
  QuadResult r;
  r.value = 1.0;
  double rel_err = 0.0;
  for (std::size_t i = 0; i < n.dim(); ++i) {
    const QuadResult ri = inner_product_plus(f.factors[i], n[i], alpha[i], spec);
    r.value *= ri.value;
    rel_err += ri.error_estimate / std::max(std::abs(ri.value), 1e-300);
    r.tail_bound += ri.tail_bound;
    r.converged = r.converged && ri.converged;
    r.evaluations += ri.evaluations;
  }
  r.error_estimate = std::abs(r.value) * rel_err;
  if (r.value == 0.0) r.error_estimate = spec.abs_tol;
  return r;
}

QuadResult inner_product_plus(const FunctionNdInfo& f, const MultiIndex& n, const Alpha& alpha,
                              const QuadSpec& spec) {
  spec.validate();
  const std::size_t d = n.dim();
  if (f.dim != d || alpha.dim() != d) throw ContractError("inner_product_plus: dimension mismatch");
  if (d > 4) throw ContractError("inner_product_plus: non-separable integrands limited to d <= 4");

  // Per-coordinate composite rules (high and low order), graded toward 0.
  struct Rule1D {
    std::vector<double> x, w, phi_hi;
    std::vector<double> xl, wl, phi_lo;
  };
  std::vector<Rule1D> rules(d);
  const int order = std::min(spec.panel_order, 20);
  const int order_lo = std::max(2, (2 * order) / 3);
  for (std::size_t i = 0; i < d; ++i) {
    const double nu = turning_scale(n[i], alpha[i]);
    double radius = std::sqrt(2.0 * nu) + 8.0;
    radius = std::min(radius, f.support_hi);
    if (f.decay_rate > 0.0) radius = std::min(radius, std::sqrt(kGaussianDepth / f.decay_rate));
    if (spec.truncation_radius > 0.0) radius = std::min(radius, spec.truncation_radius);
    const double zero = 0.0;
    const Layout layout = make_layout(0.0, radius, std::span<const double>(&zero, 1), {},
                                      oscillation_width(nu));
    std::vector<Panel> panels = layout.regular;
    double outer = layout.zones.front().extent;
    for (int j = 0; j < 30; ++j) {
      panels.push_back({0.5 * outer, outer});
      outer *= 0.5;
    }
    auto fill = [&](int ord, std::vector<double>& xs, std::vector<double>& ws, std::vector<double>& ph) {
      const GaussRule& g = gauss_legendre(ord);
      for (const auto& p : panels)
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
          const double x = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * g.nodes[q];
          xs.push_back(x);
          ws.push_back(0.5 * (p.b - p.a) * g.weights[q]);
          ph.push_back(phi(n[i], alpha[i], x));
        }
    };
    fill(order, rules[i].x, rules[i].w, rules[i].phi_hi);
    fill(order_lo, rules[i].xl, rules[i].wl, rules[i].phi_lo);
  }

  auto tensor_sum = [&](bool high) {
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> point(d);
    double total = 0.0;
    std::size_t evals = 0;
    auto size = [&](std::size_t i) { return high ? rules[i].x.size() : rules[i].xl.size(); };
    while (true) {
      double weight = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        const auto& r = rules[i];
        point[i] = high ? r.x[idx[i]] : r.xl[idx[i]];
        weight *= high ? r.w[idx[i]] * r.phi_hi[idx[i]] : r.wl[idx[i]] * r.phi_lo[idx[i]];
      }
      if (weight != 0.0) total += weight * f.eval(point);
      ++evals;
      std::size_t i = 0;
      while (i < d && ++idx[i] == size(i)) idx[i++] = 0;
      if (i == d) break;
    }
    return std::pair{total, evals};
  };
  const auto [hi, evals_hi] = tensor_sum(true);
  const auto [lo, evals_lo] = tensor_sum(false);
  QuadResult r;
  r.value = hi;
  r.error_estimate = std::abs(hi - lo) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi);
  r.converged = r.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(hi));
  r.evaluations = evals_hi + evals_lo;
  return r;
}

QuadResult inner_product_line(const Function1D& f, int n, double lambda, const QuadSpec& spec) {
  const double nu = turning_scale(n / 2, n % 2 == 0 ? lambda - 0.5 : lambda + 0.5);
  const double reach = std::sqrt(2.0 * nu) + 8.0;
  Function1D g = f;
  g.eval = [f, n, lambda](double u) { return f(u) * gen_hermite(n, lambda, u); };
  g.support_lo = std::max(f.support_lo, -reach);
  g.support_hi = std::min(f.support_hi, reach);
  g.decay_rate = f.decay_rate + 0.5;
  g.length_scale = std::min(f.length_scale, oscillation_width(nu));
  return integrate_line(g, spec);
}

QuadResult l2_norm_halfline(const Function1D& g, const QuadSpec& spec) {
  Function1D sq = g;
  sq.eval = [f = g.eval](double u) {
    const double v = f(u);
    return v * v;
  };
  sq.decay_rate = 2.0 * g.decay_rate;
  QuadResult r = integrate_halfline(sq, spec);
  const double norm = std::sqrt(std::max(r.value, 0.0));
  r.error_estimate = norm > 0.0 ? r.error_estimate / (2.0 * norm) : std::sqrt(r.error_estimate);
  r.tail_bound = norm > 0.0 ? r.tail_bound / (2.0 * norm) : std::sqrt(r.tail_bound);
  r.value = norm;
  return r;
}

QuadResult l2_diff_norm(const Function1D& g1, const Function1D& g2, const QuadSpec& spec) {
  Function1D diff;
  diff.eval = [a = g1.eval, b = g2.eval](double u) { return a(u) - b(u); };
  diff.decay_rate = std::min(g1.decay_rate, g2.decay_rate);
  diff.support_lo = std::min(g1.support_lo, g2.support_lo);
  diff.support_hi = std::max(g1.support_hi, g2.support_hi);
  diff.singular_points = g1.singular_points;
  diff.singular_points.insert(diff.singular_points.end(), g2.singular_points.begin(), g2.singular_points.end());
  diff.jumps = g1.jumps;
  diff.jumps.insert(diff.jumps.end(), g2.jumps.begin(), g2.jumps.end());
  diff.length_scale = std::min(g1.length_scale, g2.length_scale);
  return l2_norm_halfline(diff, spec);
}

Projection project_halfline(const Function1D& f, double alpha, int kmax, const QuadSpec& spec) {
  spec.validate();
  if (kmax < 0) throw ContractError("project_halfline: negative kmax");
  const double nu = turning_scale(kmax, alpha);
  const double lo = std::max(0.0, f.support_lo);
  double hi = std::min(std::sqrt(2.0 * nu) + 8.0, truncation_radius(f, spec));
  if (hi <= lo) return Projection{std::vector<double>(kmax + 1, 0.0), std::vector<double>(kmax + 1, 0.0), true};
  const std::size_t count = static_cast<std::size_t>(kmax) + 1;

  NodeUpdate update = [&f, alpha, kmax](double u, double w, std::span<double> acc) {
    const double v = w * f(u);
    if (v == 0.0) return;
    thread_local std::vector<double> buf;
    buf.resize(kmax + 1);
    phi_all(kmax, alpha, u, buf);
    for (int k = 0; k <= kmax; ++k) acc[k] += v * buf[k];
  };

  double tail = 0.0;
  if (hi < f.support_hi) {
    const auto at_r = phi_all(kmax, alpha, hi);
    double m = 0.0;
    for (double v : at_r) m = std::max(m, std::abs(v));
    tail = gaussian_tail(std::abs(f(hi)) * m, hi, f.decay_rate + 0.25);
  }

  auto singular = lo == 0.0 ? with_zero(f.singular_points) : f.singular_points;
  std::sort(singular.begin(), singular.end());
  double width = std::min(f.length_scale, oscillation_width(nu));
  Projection result;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const Layout layout = make_layout(lo, hi, singular, f.jumps, width);
    result = finish_projection(vector_integrate(update, count, layout, spec.panel_order, spec.abs_tol), tail, spec);
    if (result.converged) break;
    width *= 0.5;
  }
  return result;
}

Projection project_line(const Function1D& f, double lambda, int nmax, const QuadSpec& spec) {
  spec.validate();
  if (nmax < 0) throw ContractError("project_line: negative nmax");
  if (lambda < 0.0) throw DomainError("project_line: lambda must be >= 0");
  const double nu = turning_scale(nmax / 2, lambda + 0.5);
  const double reach = std::max(std::abs(f.support_lo), std::abs(f.support_hi));
  double hi = std::sqrt(2.0 * nu) + 8.0;
  if (spec.truncation_radius > 0.0) hi = std::min(hi, spec.truncation_radius);
  if (std::isfinite(reach)) {
    hi = std::min(hi, reach);
  } else if (f.decay_rate > 0.0) {
    hi = std::min(hi, std::sqrt(kGaussianDepth / f.decay_rate));
  } else if (!(spec.truncation_radius > 0.0)) {
    throw ContractError("project_line: integrand on an unbounded domain needs decay metadata");
  }
  const std::size_t count = static_cast<std::size_t>(nmax) + 1;

  // f(u) h_n(u) + f(-u) h_n(-u) = h_n(u) (f(u) + (-1)^n f(-u)) for u > 0.
  NodeUpdate update = [&f, lambda, nmax](double u, double w, std::span<double> acc) {
    const double fp = f(u);
    const double fm = f(-u);
    const double even = w * (fp + fm);
    const double odd = w * (fp - fm);
    if (even == 0.0 && odd == 0.0) return;
    thread_local std::vector<double> buf;
    buf.resize(nmax + 1);
    gen_hermite_all(nmax, lambda, u, buf);
    for (int n = 0; n <= nmax; ++n) acc[n] += (n % 2 == 0 ? even : odd) * buf[n];
  };

  std::vector<double> singular = {0.0};
  for (double p : f.singular_points) singular.push_back(std::abs(p));
  std::sort(singular.begin(), singular.end());
  singular.erase(std::unique(singular.begin(), singular.end()), singular.end());
  std::vector<double> jumps;
  for (double p : f.jumps) jumps.push_back(std::abs(p));
  if (std::isfinite(f.support_lo)) jumps.push_back(std::abs(f.support_lo));
  if (std::isfinite(f.support_hi)) jumps.push_back(std::abs(f.support_hi));

  double width = std::min(f.length_scale, oscillation_width(nu));
  Projection result;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const Layout layout = make_layout(0.0, hi, singular, jumps, width);
    result = finish_projection(vector_integrate(update, count, layout, spec.panel_order, spec.abs_tol), 0.0, spec);
    if (result.converged) break;
    width *= 0.5;
  }
  return result;
}

OrthonormalityReport orthonormality_defect(double alpha, int kmax, const QuadSpec& spec) {
  spec.validate();
  const double nu = turning_scale(kmax, alpha);
  const double radius = std::sqrt(2.0 * nu) + 8.0;
  const double zero = 0.0;
  const Layout layout = make_layout(0.0, radius, std::span<const double>(&zero, 1), {}, oscillation_width(nu));
  std::vector<Panel> panels = layout.regular;
  double outer = layout.zones.front().extent;
  for (int j = 0; j < 64; ++j) {
    panels.push_back({0.5 * outer, outer});
    outer *= 0.5;
  }
  const std::size_t count = static_cast<std::size_t>(kmax) + 1;
  std::vector<double> gram(count * count, 0.0);
  std::vector<double> values(count);
  for (const auto& p : panels) {
    const int order = (p.b - p.a) < 0.05 * oscillation_width(nu) ? kGradedOrder : spec.panel_order;
    const GaussRule& rule = gauss_legendre(order);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * rule.nodes[q];
      const double w = 0.5 * (p.b - p.a) * rule.weights[q];
      phi_all(kmax, alpha, u, values);
      for (std::size_t j = 0; j < count; ++j) {
        const double wj = w * values[j];
        for (std::size_t k = j; k < count; ++k) gram[j * count + k] += wj * values[k];
      }
    }
  }
  OrthonormalityReport report;
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t k = j; k < count; ++k) {
      const double defect = std::abs(gram[j * count + k] - (j == k ? 1.0 : 0.0));
      if (defect > report.max_defect) {
        report.max_defect = defect;
        report.worst_j = static_cast<int>(j);
        report.worst_k = static_cast<int>(k);
      }
    }
  return report;
}

}  // namespace hardylab
