#include "gbzk/fit.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "gbzk/error.hpp"

namespace gbzk {

FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y, FitScale scale,
                       std::size_t min_points) {
  if (x.size() != y.size()) throw SizeMismatch("fit_exponent: abscissa and value counts differ");
  if (x.size() < min_points || x.size() < 2)
    throw InvalidArgument("fit_exponent: window holds " + std::to_string(x.size()) + " points, need " +
                          std::to_string(std::max<std::size_t>(min_points, 2)));
  const std::size_t n = x.size();
  std::vector<double> X(n), Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0)) throw InvalidArgument("fit_exponent: abscissae must be positive");
    X[i] = std::log(x[i]);
    if (scale == FitScale::loglog) {
      if (!(y[i] > 0.0)) throw InvalidArgument("fit_exponent: values must be positive on log axes");
      Y[i] = std::log(y[i]);
    } else {
      Y[i] = y[i];
    }
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_exponent: degenerate window (all abscissae equal)");
  FitResult r;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = Y[i] - (r.intercept + r.slope * X[i]);
    sse += e * e;
    r.max_residual = std::max(r.max_residual, std::abs(e));
  }
  r.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  if (n > 2) {
    const boost::math::students_t dist(static_cast<double>(n - 2));
    const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
    r.slope_ci = tq * std::sqrt(sse / (n - 2) / sxx);
  } else {
    r.slope_ci = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi,
                       FitScale scale, std::size_t min_points) {
  if (x.size() != y.size()) throw SizeMismatch("fit_exponent: abscissa and value counts differ");
  std::vector<double> wx, wy;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo && x[i] <= hi) {
      wx.push_back(x[i]);
      wy.push_back(y[i]);
    }
  return fit_exponent(wx, wy, scale, min_points);
}

}  // namespace gbzk
