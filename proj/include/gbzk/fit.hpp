#pragma once

#include <cstddef>
#include <vector>

namespace gbzk {

enum class FitScale {
  loglog,   // log y against log x
  semilog,  // y against log x
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ci = 0.0;  // 95% half-width, Student t with n - 2 degrees of freedom
  double r2 = 1.0;
  double max_residual = 0.0;
  std::size_t n = 0;
};

/// Least-squares line through the transformed points. Rejects fewer than
/// min_points points and, on the log axes, nonpositive values.
FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y,
                       FitScale scale = FitScale::loglog, std::size_t min_points = 8);

/// Same, restricted to lo <= x <= hi.
FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi,
                       FitScale scale = FitScale::loglog, std::size_t min_points = 8);

}  // namespace gbzk
