#pragma once

#include <complex>
#include <vector>

#include "gbzk/grid.hpp"

namespace gbzk {

using cplx = std::complex<double>;

struct RealField2D {
  GridSpec grid;
  std::vector<double> samples;

  RealField2D() = default;
  explicit RealField2D(const GridSpec& g) : grid(g), samples(g.size(), 0.0) {}
  RealField2D(const GridSpec& g, std::vector<double> s);

  double& at(int i, int j) { return samples[static_cast<std::size_t>(j) * grid.nx() + i]; }
  double at(int i, int j) const { return samples[static_cast<std::size_t>(j) * grid.nx() + i]; }
  double max_abs() const;
};

/// Fourier coefficients approximating the continuous transform
/// f^(xi, eta) = integral of exp(-i(x xi + y eta)) f(x, y) dx dy.
struct SpectralField2D {
  GridSpec grid;
  std::vector<cplx> coeffs;

  SpectralField2D() = default;
  explicit SpectralField2D(const GridSpec& g) : grid(g), coeffs(g.size(), cplx{}) {}

  cplx& at_index(int k, int l) { return coeffs[static_cast<std::size_t>(l) * grid.nx() + k]; }
  const cplx& at_index(int k, int l) const {
    return coeffs[static_cast<std::size_t>(l) * grid.nx() + k];
  }
  // Signed wavenumber indices: k in [-nx/2, nx/2), l in [-ny/2, ny/2).
  cplx& at(int k, int l) { return at_index(grid.index_kx(k), grid.index_ky(l)); }
  const cplx& at(int k, int l) const { return at_index(grid.index_kx(k), grid.index_ky(l)); }
};

/// Samples f(x_i, y_j) on the grid.
template <class F>
RealField2D sample(const GridSpec& g, F&& f) {
  RealField2D u(g);
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.nx(); ++i) u.at(i, j) = f(g.x(i), y);
  }
  return u;
}

}  // namespace gbzk
