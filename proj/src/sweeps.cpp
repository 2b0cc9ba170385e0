#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "hardylab/kernels.hpp"
#include "hardylab/parallel.hpp"

namespace hardylab {

namespace {

// Uniform (0,1) from the raw 64-bit stream, identical on every platform.
double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Max ratio per distinct key value, keys ascending.
struct Grouped {
  std::vector<double> keys;
  std::vector<double> maxima;
};

Grouped group_max(const std::vector<SweepSample>& rows, const std::function<double(const SweepSample&)>& key) {
  Grouped g;
  for (const auto& row : rows) {
    const double k = key(row);
    auto it = std::find(g.keys.begin(), g.keys.end(), k);
    if (it == g.keys.end()) {
      g.keys.push_back(k);
      g.maxima.push_back(row.ratio);
    } else {
      auto& m = g.maxima[static_cast<std::size_t>(it - g.keys.begin())];
      m = std::max(m, row.ratio);
    }
  }
  std::vector<std::size_t> order(g.keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g.keys[a] < g.keys[b]; });
  Grouped sorted;
  for (auto i : order) {
    sorted.keys.push_back(g.keys[i]);
    sorted.maxima.push_back(g.maxima[i]);
  }
  return sorted;
}

SlopeFit slope_of(const Grouped& g) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < g.keys.size(); ++i)
    if (g.maxima[i] > 0.0) {
      x.push_back(g.keys[i]);
      y.push_back(g.maxima[i]);
    }
  return x.size() >= 2 ? fit_loglog_slope(x, y) : SlopeFit{};
}

void finalize(BoundCheckReport& report, const std::function<double(const SweepSample&)>& driver) {
  report.samples = report.rows.size();
  for (const auto& row : report.rows)
    if (row.ratio > report.max_ratio || report.arg_max.empty()) {
      report.max_ratio = row.ratio;
      report.arg_max = row.params;
    }
  report.fitted_constant = report.max_ratio;
  const Grouped g = group_max(report.rows, driver);
  report.driver_values = g.keys;
  report.driver_max_ratio = g.maxima;
  report.slope = slope_of(g);
}

double inverse_one_minus_r(const SweepSample& s) { return 1.0 / (1.0 - s.params[1]); }

}  // namespace

BoundCheckReport kernel_difference_sweep(double alpha, const KernelDifferenceGrid& grid) {
  BoundCheckReport report;
  report.name = "kernel-difference";
  report.grid_version = KernelDifferenceGrid::kVersion;
  report.param_names = {"alpha", "r", "u", "u_prime"};
  report.driver = "1/(1-r)";

  for (double r : grid.r)
    for (double u : grid.u)
      for (double gap : grid.gap) report.rows.push_back({{alpha, r, u, u + gap}, 0.0});
  parallel_for(report.rows.size(), [&](std::size_t i) {
    const auto& q = report.rows[i].params;
    report.rows[i].ratio = kernel_difference_ratio(q[0], q[1], q[2], q[3]);
  });
  finalize(report, inverse_one_minus_r);
  report.extra_slopes.emplace_back(
      "1/|u-u'|", slope_of(group_max(report.rows, [&](const SweepSample& s) {
        // Snap to the configured gap so rounding in u + gap does not split groups.
        const double gap = std::abs(s.params[3] - s.params[2]);
        double best = grid.gap.front();
        for (double g : grid.gap)
          if (std::abs(g - gap) < std::abs(best - gap)) best = g;
        return 1.0 / best;
      })));
  return report;
}

BoundCheckReport basis_difference_sweep(double alpha, const BasisDifferenceGrid& grid) {
  BoundCheckReport report;
  report.name = "basis-difference";
  report.grid_version = BasisDifferenceGrid::kVersion;
  report.param_names = {"alpha", "k", "u", "v"};
  report.driver = "1/|u-v| (decade bins)";

  // Random pairs plus near-diagonal pairs on a log grid.
  std::vector<std::pair<double, double>> pairs;
  std::mt19937_64 rng(grid.seed);
  for (int i = 0; i < grid.random_pairs; ++i) {
    const double u = unit_open(rng);
    const double v = unit_open(rng);
    pairs.emplace_back(u, v);
  }
  for (int i = 0; i < 20; ++i) {
    const double u = std::pow(10.0, -3.0 + 3.0 * i / 20.0) * 0.9;
    for (double gap : {1e-4, 1e-3, 1e-2, 1e-1})
      if (u + gap < 1.0) pairs.emplace_back(u, u + gap);
  }

  for (int k : grid.k)
    for (const auto& [u, v] : pairs) report.rows.push_back({{alpha, static_cast<double>(k), u, v}, 0.0});
  parallel_for(report.rows.size(), [&](std::size_t i) {
    const auto& q = report.rows[i].params;
    report.rows[i].ratio = basis_difference_ratio(static_cast<int>(q[1]), q[0], q[2], q[3]);
  });
  finalize(report, [](const SweepSample& s) {
    const double decade = std::floor(std::log10(std::abs(s.params[3] - s.params[2])) + 1e-9);
    return std::pow(10.0, -(decade + 0.5));
  });
  report.extra_slopes.emplace_back("k+1", slope_of(group_max(report.rows, [](const SweepSample& s) {
                                     return s.params[1] + 1.0;
                                   })));
  return report;
}

BoundCheckReport kernel_weighted_norm_sweep(double alpha, const KernelWeightedNormGrid& grid) {
  BoundCheckReport report;
  report.name = "kernel-weighted-norm";
  report.grid_version = KernelWeightedNormGrid::kVersion;
  report.param_names = {"alpha", "r", "u"};
  report.driver = "1/(1-r)";

  for (double r : grid.r)
    for (double u : grid.u) report.rows.push_back({{alpha, r, u}, 0.0});
  parallel_for(report.rows.size(), [&](std::size_t i) {
    const auto& q = report.rows[i].params;
    report.rows[i].ratio = kernel_weighted_norm_ratio(q[0], q[1], q[2]);
  });
  finalize(report, inverse_one_minus_r);
  return report;
}

}  // namespace hardylab
