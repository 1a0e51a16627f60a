#include <cmath>

#include "doctest.h"
#include "gbzk/error.hpp"
#include "gbzk/expansion_check.hpp"

using namespace gbzk;

TEST_CASE("finite differences of sin") {
  auto f = [](long double x) { return std::complex<long double>(std::sin(x), 0.0L); };
  const double x = 0.4;
  const double ref[5] = {0.0, std::cos(x), -std::sin(x), -std::cos(x), std::sin(x)};
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(central_difference(f, x, k, 0.05) - ref[k]) < 1e-10);
  CHECK_THROWS_AS(central_difference(f, x, 5, 0.05), InvalidArgument);
}

TEST_CASE("Gaussian jet derivatives") {
  const GaussianJet j(1.3, 0.2, 0.9, 1.1, 0.5);
  auto f = [&](long double x) { return j.extended(x, 0.3); };
  for (int k = 1; k <= 4; ++k) {
    const cplx fd = central_difference(f, 0.7, k, 0.02);
    CHECK(std::abs(j.derivative(0.7, 0.3, k) - fd) < 1e-7 * (1 + std::abs(fd)));
  }
}

TEST_CASE("first and second derivative against the chain rule") {
  const GaussianJet src(1.0, 0.0, 1.0, 1.0, 0.4);
  for (double a : {0.0, 0.5, 1.0})
    for (double t : {0.2, 1.0})
      for (double xi : {-1.7, -0.3, 0.25, 1.1})
        for (double eta : {0.0, 0.8}) {
          const DispersionParams p = DispersionParams::checked(a);
          const PhiJet jet = src.jet(xi, eta);
          const cplx I(0.0, 1.0);
          const double g = xi * (eta * eta - std::pow(std::abs(xi), 1 + a));
          const double g1 = eta * eta - (2 + a) * std::pow(std::abs(xi), 1 + a);
          const double g2 = -(2 + a) * (1 + a) * std::pow(std::abs(xi), a) * (xi > 0 ? 1.0 : -1.0);
          const cplx psi = std::exp(I * t * g);
          const cplx d1 = psi * (I * t * g1 * jet.v[0] + jet.v[1]);
          const cplx d2 = psi * ((I * t * g2 + (I * t * g1) * (I * t * g1)) * jet.v[0] + 2.0 * I * t * g1 * jet.v[1] +
                                 jet.v[2]);
          const ExpansionResult r1 = xi_expansion_eval(1, jet, t, p);
          const ExpansionResult r2 = xi_expansion_eval(2, jet, t, p);
          CHECK(std::abs(r1.value - d1) < 1e-12 * (1 + std::abs(d1)));
          CHECK(std::abs(r2.value - d2) < 1e-12 * (1 + std::abs(d2)));
          cplx sum{};
          for (const auto& term : r2.terms) sum += term.value;
          CHECK(std::abs(sum - r2.value) < 1e-13 * (1 + std::abs(d2)));
        }
}

TEST_CASE("term tables at t = 0 reduce to the jet") {
  const GaussianJet src(0.7, 0.1, 1.2, 0.8, -0.3);
  const PhiJet jet = src.jet(0.6, -0.4);
  for (int k = 1; k <= 4; ++k) {
    const cplx v = xi_expansion_eval(k, jet, 0.0, DispersionParams::checked(0.5)).value;
    CHECK(std::abs(v - jet.v[k]) < 1e-13 * (1 + std::abs(jet.v[k])));
  }
}

TEST_CASE("table checks and named discrepancies") {
  const GaussianJet src(1.0, 0.0, 1.0, 1.0, 0.5);
  const std::vector<double> xi{-2.0, -0.5, 0.1, 0.9, 2.5}, eta{-1.0, 0.0, 1.5};
  for (int k = 1; k <= 3; ++k) CHECK(expansion_corrections(k).empty());
  for (int k = 1; k <= 4; ++k)
    for (double t : {0.0, 0.2, 1.0}) {
      const ExpansionCheckReport r = xi_expansion_check(k, t, DispersionParams::checked(0.5), src, xi, eta);
      CHECK(r.points == xi.size() * eta.size());
      CHECK(r.passed());
      CHECK(r.corrected_max_rel_error < 1e-6);
      CHECK(r.faa_di_bruno_max_rel_error < 1e-6);
      if (k < 4 || t == 0.0) CHECK(r.flagged_terms.empty());
    }
  const ExpansionCheckReport r4 = xi_expansion_check(4, 1.0, DispersionParams::checked(0.5), src, xi, eta);
  CHECK_FALSE(r4.table_ok());
  CHECK(r4.flagged_terms == expansion_corrections(4));
}

TEST_CASE("argument checks") {
  const GaussianJet src;
  const PhiJet jet0 = src.jet(0.0, 0.3);
  CHECK_THROWS_AS(xi_expansion_eval(0, jet0, 1.0, {}), InvalidArgument);
  CHECK_THROWS_AS(xi_expansion_eval(2, jet0, 1.0, {}), InvalidArgument);
  CHECK_NOTHROW(xi_expansion_eval(1, jet0, 1.0, {}));
  CHECK_THROWS_AS(xi_expansion_check(1, 0.0, {}, src, {0.05}, {0.0}), InvalidArgument);
}
