#include <cmath>

#include "doctest.h"
#include "gbzk/error.hpp"
#include "gbzk/propagator.hpp"
#include "gbzk/spectral.hpp"

using namespace gbzk;

TEST_CASE("dispersion symbol") {
  CHECK(dispersion_symbol(2.0, 3.0, 0.5) == doctest::Approx(2.0 * (9.0 - std::pow(2.0, 1.5))));
  CHECK(dispersion_symbol(-2.0, 3.0, 0.5) == doctest::Approx(-dispersion_symbol(2.0, 3.0, 0.5)));
  CHECK(dispersion_symbol(0.0, 5.0, 1.0) == 0.0);
  CHECK_THROWS_AS(DispersionParams::checked(1.5), InvalidArgument);
  CHECK_THROWS_AS(DispersionParams::checked(-0.1), InvalidArgument);
}

TEST_CASE("plane waves travel with the symbol") {
  // For e^{i(kx + ly)} the equation gives u_t = i k (l^2 - |k|^{1+a}) u, so cos(kx + ly)
  // becomes cos(kx + ly + t omega).
  const GridSpec g = make_grid(32, 32, 2.0 * M_PI, 2.0 * M_PI);
  for (double a : {0.0, 0.3, 1.0}) {
    const int k = 3, l = 2;
    const double t = 0.77;
    const double w = k * (l * l - std::pow(k, 1.0 + a));
    const SpectralField2D u0 = to_spectral(sample(g, [&](double x, double y) { return std::cos(k * x + l * y); }));
    const RealField2D u = to_physical(apply_linear_propagator(u0, t, DispersionParams::checked(a)));
    const RealField2D ref = sample(g, [&](double x, double y) { return std::cos(k * x + l * y + t * w); });
    double err = 0.0;
    for (std::size_t i = 0; i < u.samples.size(); ++i) err = std::max(err, std::abs(u.samples[i] - ref.samples[i]));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("group property and unitarity") {
  const GridSpec g = make_grid(64, 32, 20.0, 12.0);
  const DispersionParams p = DispersionParams::checked(0.5);
  const SpectralField2D u0 =
      to_spectral(sample(g, [](double x, double y) { return std::exp(-x * x - 0.5 * y * y) * (1 + x); }));
  const SpectralField2D a = apply_linear_propagator(apply_linear_propagator(u0, 0.3, p), 0.45, p);
  const SpectralField2D b = apply_linear_propagator(u0, 0.75, p);
  double err = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) err = std::max(err, std::abs(a.coeffs[i] - b.coeffs[i]));
  CHECK(err < 1e-13);
  CHECK(l2_norm(b) == doctest::Approx(l2_norm(u0)).epsilon(1e-14));
  CHECK(imaginary_residue(b) < 1e-13);
}

TEST_CASE("lattice rates") {
  const GridSpec g = make_grid(16, 8, 2.0 * M_PI, 2.0 * M_PI);
  const auto r = lattice_phase_rates(g, DispersionParams::checked(0.5));
  REQUIRE(r.size() == g.size());
  for (int l = 0; l < g.ny(); ++l) {
    CHECK(r[static_cast<std::size_t>(l) * g.nx()] == 0.0);
    CHECK(r[static_cast<std::size_t>(l) * g.nx() + 8] == 0.0);
    CHECK(r[static_cast<std::size_t>(l) * g.nx() + 3] == doctest::Approx(dispersion_symbol(3.0, g.eta(l), 0.5)));
  }
}
