#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "hardylab/bases.hpp"
#include "hardylab/errors.hpp"

namespace hardylab {

namespace {

struct Sample {
  double u2;
  double log_ratio_base;  // ln|phi| - ln sqrt(u)
};

EnvelopeFit compute_fit(double alpha, int k_max) {
  if (alpha < -0.5) throw DomainError("fit_envelope: alpha must be >= -1/2");
  if (k_max < 0) throw DomainError("fit_envelope: negative k_max");
  const double nu_max = turning_scale(k_max, alpha);
  const double u_end = std::sqrt(3.0 * nu_max) + 12.0;

  std::vector<double> grid;
  for (int j = 0; j < 200; ++j) grid.push_back(std::pow(10.0, -6.0 + 6.0 * j / 200.0));
  for (double u = 1.0; u <= u_end; u += 0.005) grid.push_back(u);

  double inner_max = 0.0;  // max ratio over the first three regimes
  std::vector<Sample> decay;
  std::vector<double> values(static_cast<std::size_t>(k_max) + 1);
  for (double u : grid) {
    phi_all(k_max, alpha, u, values);
    for (int k = 0; k <= k_max; ++k) {
      const double v = std::abs(values[k]);
      const double nu = turning_scale(k, alpha);
      if (u <= std::sqrt(1.5 * nu)) {
        inner_max = std::max(inner_max, v / envelope(k, alpha, u, 0.0));
      } else if (v > 0.0) {
        decay.push_back({u * u, std::log(v) - 0.5 * std::log(u)});
      }
    }
  }

  auto decay_max = [&](double gamma) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : decay) best = std::max(best, s.log_ratio_base + gamma * s.u2);
    return std::exp(best);
  };

  // Largest gamma whose decay-regime ratio stays under the inner maximum.
  constexpr double kGammaLo = 1e-3;
  constexpr double kGammaHi = 0.4;
  double gamma = kGammaLo;
  if (decay_max(kGammaHi) <= inner_max) {
    gamma = kGammaHi;
  } else if (decay_max(kGammaLo) <= inner_max) {
    double lo = kGammaLo;
    double hi = kGammaHi;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (decay_max(mid) <= inner_max ? lo : hi) = mid;
    }
    gamma = lo;
  }
  const double constant = std::max(inner_max, decay_max(gamma));
  return {alpha, k_max, gamma, constant};
}

}  // namespace

EnvelopeFit fit_envelope(double alpha, int k_max) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, EnvelopeFit> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({alpha, k_max}); it != cache.end()) return it->second;
  }
  EnvelopeFit fit = compute_fit(alpha, k_max);
  std::lock_guard lock(mutex);
  cache.emplace(std::make_pair(alpha, k_max), fit);
  return fit;
}

}  // namespace hardylab
