#pragma once

#include <limits>
#include <vector>

#include "gbzk/field.hpp"
#include "gbzk/propagator.hpp"
#include "gbzk/spectral.hpp"

namespace gbzk {

/// Smooth truncation of <x> = sqrt(1 + x^2): equal to <x> on |x| <= N and to 2N on
/// |x| >= 3N. On N <= |x| <= 3N the slope is <x>' m((|x| - N) / (2N sigma)) with
/// m = 1 - smoothstep5 on [0, 1] and 0 beyond; sigma is solved so the plateau is 2N.
/// Requires 2N >= <N>, i.e. N >= 1/sqrt(3).
class TruncatedWeight {
 public:
  explicit TruncatedWeight(double N);

  double N() const noexcept { return n_; }
  bool infinite() const noexcept { return n_ == std::numeric_limits<double>::infinity(); }
  double sigma() const noexcept { return sigma_; }

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

 private:
  double n_;
  double sigma_ = 0.0;
  double blend(double x) const;  // value on N <= x <= N(1 + 2 sigma)
};

double truncated_weight(double x, double N);

/// sup |w''| / <x>'' over a dense sample of [0, 4N].
double truncated_weight_curvature_constant(double N, int samples = 20000);

struct WeightSpec {
  double r1 = 0.0;
  double r2 = 0.0;
  double N = std::numeric_limits<double>::infinity();
};

/// sqrt( integral (w(x)^{2 r1} + w(y)^{2 r2}) u^2 ) with w = <.>_N.
double weighted_norm(const RealField2D& u, const WeightSpec& spec);
/// ||<x>_N^{r1} u|| and ||<y>_N^{r2} u||.
double weighted_norm_x(const RealField2D& u, double r1, double N);
double weighted_norm_y(const RealField2D& u, double r2, double N);

struct SobolevSpec {
  double s1 = 0.0;
  double s2 = 0.0;
  static SobolevSpec energy(double s, double a) { return {(1.0 + a) * s, 2.0 * s}; }
};

/// sqrt(||u||^2 + ||J_x^{s1} u||^2 + ||J_y^{s2} u||^2), evaluated spectrally.
double sobolev_norm(const SpectralField2D& u, const SobolevSpec& spec);
double sobolev_norm(const RealField2D& u, const SobolevSpec& spec);
double bessel_norm(const SpectralField2D& u, double s, Axis axis);

double mass(const SpectralField2D& u);
double mass(const RealField2D& u);

/// integral of |D_x^{(a+1)/2} u|^2 - u_y^2 + u^3 / 3.
double hamiltonian(const RealField2D& u, const DispersionParams& params);
double hamiltonian(const RealField2D& u, const SpectralField2D& spec, const DispersionParams& params);

/// The xi = 0 column of u^, in FFT row order.
std::vector<cplx> zero_mode_slice(const SpectralField2D& u);
std::vector<cplx> zero_mode_slice(const RealField2D& u);
double zero_mode_max_deviation(const SpectralField2D& u, const std::vector<cplx>& reference);

struct XMoment {
  cplx value;
  double boundary_ratio;  // max |u| on the box edge over max |u|
  bool localized;         // boundary_ratio < 1e-12
};

/// integral of x e^{-i eta y} u dx dy on the centred box.
XMoment x_moment(const RealField2D& u, double eta);

/// max |u| on the outermost rows and columns relative to max |u|.
double boundary_ratio(const RealField2D& u);

struct InterxResult {
  std::vector<double> N_values;
  std::vector<int> resolutions;
  std::vector<std::vector<double>> ratio;  // [resolution][N], max over the family
  double slope_vs_N = 0.0;
  double slope_vs_refinement = 0.0;
};

/// ||J_x^{alpha beta}(<x>_N^{(1-beta) b} f)|| / (||<x>_N^b f||^{1-beta} ||J_x^alpha f||^beta)
/// for a Gaussian family, over an N ladder and a ladder of grid doublings of [-L/2, L/2).
InterxResult interx_probe(double alpha, double beta, double b, const std::vector<double>& N_values,
                          const std::vector<int>& resolutions, double L);

}  // namespace gbzk
