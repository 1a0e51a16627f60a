#include "gbzk/propagator.hpp"

#include <cmath>
#include <string>

#include "gbzk/error.hpp"

namespace gbzk {

DispersionParams DispersionParams::checked(double a) {
  if (!(a >= 0.0 && a <= 1.0))
    throw InvalidArgument("dispersion exponent a must lie in [0, 1] (got " + std::to_string(a) + ")");
  return DispersionParams{a};
}

double dispersion_symbol(double xi, double eta, double a) {
  return xi * (eta * eta - std::pow(std::abs(xi), 1.0 + a));
}

std::vector<double> lattice_phase_rates(const GridSpec& g, const DispersionParams& params) {
  std::vector<double> w(g.size());
  for (int l = 0; l < g.ny(); ++l) {
    const double eta = g.eta(l);
    for (int k = 0; k < g.nx(); ++k)
      w[static_cast<std::size_t>(l) * g.nx() + k] =
          g.is_x_nyquist(k) ? 0.0 : dispersion_symbol(g.xi(k), eta, params.a);
  }
  return w;
}

SpectralField2D apply_linear_propagator(const SpectralField2D& field, double t,
                                        const DispersionParams& params) {
  const std::vector<double> w = lattice_phase_rates(field.grid, params);
  SpectralField2D out(field.grid);
  for (std::size_t n = 0; n < w.size(); ++n) out.coeffs[n] = field.coeffs[n] * std::polar(1.0, t * w[n]);
  return out;
}

}  // namespace gbzk
