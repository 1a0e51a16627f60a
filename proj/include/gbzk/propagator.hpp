#pragma once

#include <vector>

#include "gbzk/field.hpp"

namespace gbzk {

/// Order parameter of the dispersion |xi|^{1+a}; a = 0 is BO-ZK, a = 1 the ZK limit.
struct DispersionParams {
  double a = 0.5;

  static DispersionParams checked(double a);
};

/// Phase rate omega = xi (eta^2 - |xi|^{1+a}) of exp(i t omega).
double dispersion_symbol(double xi, double eta, double a);

/// Discrete phase rates on the grid lattice (FFT order). The x-Nyquist column
/// is its own mirror image, so the odd symbol is taken as 0 there.
std::vector<double> lattice_phase_rates(const GridSpec& grid, const DispersionParams& params);

/// Exact linear flow U(t): coefficient-wise multiplication by exp(i t omega).
SpectralField2D apply_linear_propagator(const SpectralField2D& field, double t,
                                        const DispersionParams& params);

}  // namespace gbzk
