#include <cmath>
#include <random>

#include "doctest.h"
#include "gbzk/error.hpp"
#include "gbzk/spectral.hpp"

using namespace gbzk;

namespace {

double max_diff(const RealField2D& a, const RealField2D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) m = std::max(m, std::abs(a.samples[i] - b.samples[i]));
  return m;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_grid(63, 64, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(64, 6, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(64, 64, 0.0, 1.0), InvalidArgument);
  const GridSpec g = make_grid(16, 8, 4.0, 2.0);
  CHECK(g.x(0) == doctest::Approx(-2.0));
  CHECK(g.y(7) == doctest::Approx(0.75));
  CHECK(g.signed_kx(8) == -8);
  CHECK(g.xi(15) == doctest::Approx(-2.0 * M_PI / 4.0));
  CHECK(g.is_x_nyquist(8));
}

TEST_CASE("round trip") {
  const GridSpec g = make_grid(32, 24, 7.0, 5.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  RealField2D u(g);
  for (double& v : u.samples) v = n(rng);
  CHECK(max_diff(to_physical(to_spectral(u)), u) < 1e-13);
}

TEST_CASE("coefficients approximate the continuous transform") {
  // exp(-x^2 - y^2) has transform pi exp(-(xi^2 + eta^2) / 4)
  const GridSpec g = make_grid(64, 64, 20.0, 20.0);
  const SpectralField2D s = to_spectral(sample(g, [](double x, double y) { return std::exp(-x * x - y * y); }));
  for (int k : {0, 1, 3, -5})
    for (int l : {0, 2, -4}) {
      const double xi = 2.0 * M_PI * k / 20.0, eta = 2.0 * M_PI * l / 20.0;
      const cplx c = s.at(k, l);
      CHECK(std::abs(c - M_PI * std::exp(-(xi * xi + eta * eta) / 4.0)) < 1e-12);
    }
  // A shifted bump picks up exp(-i x0 xi)
  const double x0 = 1.3;
  const SpectralField2D t =
      to_spectral(sample(g, [&](double x, double y) { return std::exp(-(x - x0) * (x - x0) - y * y); }));
  const double xi = 2.0 * M_PI * 2 / 20.0;
  CHECK(std::abs(t.at(2, 0) - M_PI * std::exp(-xi * xi / 4.0) * std::polar(1.0, -x0 * xi)) < 1e-12);
}

TEST_CASE("multipliers on single modes") {
  const GridSpec g = make_grid(32, 32, 2.0 * M_PI, 2.0 * M_PI);
  const RealField2D c = sample(g, [](double x, double y) { return std::cos(3 * x + 2 * y); });
  const RealField2D s = sample(g, [](double x, double y) { return std::sin(3 * x + 2 * y); });
  const SpectralField2D C = to_spectral(c);

  const RealField2D d = to_physical(fractional_x_derivative(C, 0.7));
  CHECK(max_diff(d, sample(g, [](double x, double y) { return std::pow(3.0, 0.7) * std::cos(3 * x + 2 * y); })) < 1e-12);
  const RealField2D dy = to_physical(fractional_y_derivative(C, 1.5));
  CHECK(max_diff(dy, sample(g, [](double x, double y) { return std::pow(2.0, 1.5) * std::cos(3 * x + 2 * y); })) <
        1e-12);
  CHECK(max_diff(to_physical(hilbert_x(C)), s) < 1e-12);
  const RealField2D dx = to_physical(derivative_x(C));
  CHECK(max_diff(dx, sample(g, [](double x, double y) { return -3.0 * std::sin(3 * x + 2 * y); })) < 1e-12);
  const RealField2D dyy = to_physical(derivative_y(derivative_y(C)));
  CHECK(max_diff(dyy, sample(g, [](double x, double y) { return -4.0 * std::cos(3 * x + 2 * y); })) < 1e-12);
  const RealField2D j = to_physical(bessel_potential(C, 2.0, Axis::both));
  CHECK(max_diff(j, sample(g, [](double x, double y) { return 14.0 * std::cos(3 * x + 2 * y); })) < 1e-11);
  // hilbert composed with d_x is D_x
  CHECK(max_diff(to_physical(hilbert_x(derivative_x(C))), to_physical(fractional_x_derivative(C, 1.0))) < 1e-12);
}

TEST_CASE("fractional derivative kills the zero column") {
  const GridSpec g = make_grid(16, 16, 6.0, 6.0);
  const RealField2D u = sample(g, [](double, double y) { return std::cos(2.0 * M_PI * y / 6.0); });
  CHECK(to_physical(fractional_x_derivative(to_spectral(u), 0.5)).max_abs() < 1e-14);
  CHECK_THROWS_AS(fractional_x_derivative(to_spectral(u), 0.0), InvalidArgument);
}

TEST_CASE("dealias and Parseval") {
  const GridSpec g = make_grid(48, 24, 3.0, 2.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  RealField2D u(g);
  for (double& v : u.samples) v = U(rng);
  const SpectralField2D s = to_spectral(u);
  CHECK(l2_norm(u) == doctest::Approx(l2_norm(s)).epsilon(1e-13));
  const SpectralField2D d = dealias(s);
  for (int l = 0; l < g.ny(); ++l)
    for (int k = 0; k < g.nx(); ++k) {
      const bool kept = std::abs(g.signed_kx(k)) <= 16 && std::abs(g.signed_ky(l)) <= 8;
      if (!kept) CHECK(d.at_index(k, l) == cplx{});
      else CHECK(d.at_index(k, l) == s.at_index(k, l));
    }
  CHECK(imaginary_residue(s) < 1e-14);
}
