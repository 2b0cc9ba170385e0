#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "hardylab/errors.hpp"
#include "hardylab/kernels.hpp"

namespace hardylab {

SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("fit_loglog_slope: size mismatch");
  if (x.size() < 2) throw FitError("fit_loglog_slope: need at least two points");
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx(n);
  std::vector<double> ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw FitError("fit_loglog_slope: non-positive value");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw FitError("fit_loglog_slope: degenerate abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = n;
  if (n < 3) {
    fit.half_width = std::numeric_limits<double>::infinity();
    return fit;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - fit.intercept - fit.slope * lx[i];
    sse += e * e;
  }
  const double se = std::sqrt(sse / (n - 2) / sxx);
  const boost::math::students_t dist(static_cast<double>(n - 2));
  fit.half_width = boost::math::quantile(dist, 0.975) * se;
  return fit;
}

}  // namespace hardylab
