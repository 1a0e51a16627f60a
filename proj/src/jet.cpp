#include "gbzk/jet.hpp"

#include <cmath>

#include "gbzk/error.hpp"

namespace gbzk {

PhiJet JetSource::jet(double xi, double eta) const {
  PhiJet j;
  j.xi = xi;
  j.eta = eta;
  for (int m = 0; m <= 4; ++m) j.v[m] = derivative(xi, eta, m);
  return j;
}

std::complex<long double> JetSource::extended(long double xi, double eta) const {
  const cplx v = derivative(static_cast<double>(xi), eta, 0);
  return {v.real(), v.imag()};
}

std::complex<long double> GaussianJet::extended(long double xi, double eta) const {
  const long double d = xi - xi0_;
  const long double re = -d * d / (2.0L * sxi_ * sxi_) - static_cast<long double>(eta) * eta / (2.0L * seta_ * seta_);
  return static_cast<long double>(amp_) * std::exp(re) * std::polar(1.0L, -static_cast<long double>(x0_) * xi);
}

GaussianJet::GaussianJet(double amplitude, double xi0, double s_xi, double s_eta, double x0)
    : amp_(amplitude), xi0_(xi0), sxi_(s_xi), seta_(s_eta), x0_(x0) {
  if (!(s_xi > 0.0 && s_eta > 0.0)) throw InvalidArgument("GaussianJet: widths must be positive");
}

cplx GaussianJet::derivative(double xi, double eta, int order) const {
  const double d = xi - xi0_;
  const cplx q = -d * d / (2 * sxi_ * sxi_) - eta * eta / (2 * seta_ * seta_) - cplx(0.0, x0_ * xi);
  const cplx q1 = -d / (sxi_ * sxi_) - cplx(0.0, x0_);
  const double q2 = -1.0 / (sxi_ * sxi_);
  const cplx g = amp_ * std::exp(q);
  switch (order) {
    case 0: return g;
    case 1: return q1 * g;
    case 2: return (q1 * q1 + q2) * g;
    case 3: return (q1 * q1 * q1 + 3.0 * q1 * q2) * g;
    case 4: return (q1 * q1 * q1 * q1 + 6.0 * q1 * q1 * q2 + 3.0 * q2 * q2) * g;
    default: throw InvalidArgument("GaussianJet: derivative order must be in 0..4");
  }
}

}  // namespace gbzk
