#pragma once

#include <functional>

#include "gbzk/expansion.hpp"

namespace gbzk {

/// Smooth phi^(xi, eta) with analytic xi-derivatives up to order 4.
class JetSource {
 public:
  virtual ~JetSource() = default;
  virtual cplx derivative(double xi, double eta, int order) const = 0;
  PhiJet jet(double xi, double eta) const;
  cplx operator()(double xi, double eta) const { return derivative(xi, eta, 0); }
  // phi^ in extended precision for finite-difference oracles; defaults to widening the double value.
  virtual std::complex<long double> extended(long double xi, double eta) const;
};

/// amplitude * exp(-(xi - xi0)^2 / (2 s_xi^2) - eta^2 / (2 s_eta^2) - i x0 xi):
/// the transform of a Gaussian centred at x0.
class GaussianJet final : public JetSource {
 public:
  GaussianJet(double amplitude = 1.0, double xi0 = 0.0, double s_xi = 1.0, double s_eta = 1.0,
              double x0 = 0.0);
  cplx derivative(double xi, double eta, int order) const override;
  std::complex<long double> extended(long double xi, double eta) const override;

 private:
  double amp_, xi0_, sxi_, seta_, x0_;
};

}  // namespace gbzk
