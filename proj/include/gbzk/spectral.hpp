#pragma once

#include <memory>

#include "gbzk/field.hpp"

namespace gbzk {

/// Owns an FFTW plan pair and workspace for one grid shape. Not thread-safe;
/// create one per worker (the free functions below keep a thread-local cache).
class FourierTransform {
 public:
  explicit FourierTransform(const GridSpec& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const GridSpec& grid() const noexcept { return grid_; }

  void forward(const RealField2D& in, SpectralField2D& out);
  void inverse(const SpectralField2D& in, RealField2D& out);
  // Inverse transform keeping the imaginary part; used to measure reality residue.
  void inverse_complex(const SpectralField2D& in, std::vector<cplx>& out);

 private:
  struct Plan;
  GridSpec grid_;
  std::unique_ptr<Plan> plan_;
};

SpectralField2D to_spectral(const RealField2D& u);
RealField2D to_physical(const SpectralField2D& u);

/// Max |Im| of the inverse transform relative to max |Re|.
double imaginary_residue(const SpectralField2D& u);

enum class Axis { x, y, both };

/// Multiplies coefficient (k, l) by m(xi_k, eta_l, k_index, l_index).
template <class M>
SpectralField2D apply_multiplier(const SpectralField2D& in, M&& m) {
  SpectralField2D out(in.grid);
  const GridSpec& g = in.grid;
  for (int l = 0; l < g.ny(); ++l) {
    const double eta = g.eta(l);
    for (int k = 0; k < g.nx(); ++k) out.at_index(k, l) = m(g.xi(k), eta, k, l) * in.at_index(k, l);
  }
  return out;
}

/// |xi|^z in x; the xi = 0 column is annihilated (|0|^z = 0). Requires z > 0.
SpectralField2D fractional_x_derivative(const SpectralField2D& f, double z);
/// |eta|^z in y; eta = 0 row annihilated. Requires z > 0.
SpectralField2D fractional_y_derivative(const SpectralField2D& f, double z);

/// (1 + xi^2)^{s/2}, (1 + eta^2)^{s/2} or (1 + xi^2 + eta^2)^{s/2}.
SpectralField2D bessel_potential(const SpectralField2D& f, double s, Axis axis);

/// -i sgn(xi); the xi = 0 column and the x-Nyquist column are zeroed.
SpectralField2D hilbert_x(const SpectralField2D& f);

/// i xi and i eta with the matching Nyquist column/row zeroed.
SpectralField2D derivative_x(const SpectralField2D& f);
SpectralField2D derivative_y(const SpectralField2D& f);

/// 2/3 rule: zero every mode with |k| > nx/3 or |l| > ny/3.
SpectralField2D dealias(const SpectralField2D& f);
void dealias_in_place(SpectralField2D& f);

/// Quadrature L2 norm sqrt(sum |u|^2 dx dy) and its Parseval counterpart.
double l2_norm(const RealField2D& u);
double l2_norm(const SpectralField2D& u);

}  // namespace gbzk
