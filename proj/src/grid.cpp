#include "gbzk/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gbzk/error.hpp"
#include "gbzk/field.hpp"

namespace gbzk {

GridSpec make_grid(int nx, int ny, double lx, double ly) {
  auto check_count = [](int n, const char* name) {
    if (n < 8 || n % 2 != 0)
      throw InvalidArgument(std::string(name) + " must be even and >= 8 (got " +
                            std::to_string(n) + ")");
  };
  check_count(nx, "nx");
  check_count(ny, "ny");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw InvalidArgument("box lengths must be positive and finite");
  GridSpec g;
  g.nx_ = nx;
  g.ny_ = ny;
  g.lx_ = lx;
  g.ly_ = ly;
  return g;
}

double GridSpec::dxi() const noexcept { return 2.0 * std::numbers::pi / lx_; }
double GridSpec::deta() const noexcept { return 2.0 * std::numbers::pi / ly_; }
double GridSpec::xi(int k) const noexcept { return dxi() * signed_kx(k); }
double GridSpec::eta(int l) const noexcept { return deta() * signed_ky(l); }

std::vector<double> GridSpec::xi_lattice() const {
  std::vector<double> v(nx_);
  for (int k = 0; k < nx_; ++k) v[k] = dxi() * (k - nx_ / 2);
  return v;
}

std::vector<double> GridSpec::eta_lattice() const {
  std::vector<double> v(ny_);
  for (int l = 0; l < ny_; ++l) v[l] = deta() * (l - ny_ / 2);
  return v;
}

std::vector<double> GridSpec::x_coords() const {
  std::vector<double> v(nx_);
  for (int i = 0; i < nx_; ++i) v[i] = x(i);
  return v;
}

std::vector<double> GridSpec::y_coords() const {
  std::vector<double> v(ny_);
  for (int j = 0; j < ny_; ++j) v[j] = y(j);
  return v;
}

RealField2D::RealField2D(const GridSpec& g, std::vector<double> s) : grid(g), samples(std::move(s)) {
  if (samples.size() != g.size())
    throw SizeMismatch("sample count " + std::to_string(samples.size()) + " does not match grid " +
                       std::to_string(g.nx()) + "x" + std::to_string(g.ny()));
}

double RealField2D::max_abs() const {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace gbzk
