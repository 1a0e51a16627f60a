#include "gbzk/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "gbzk/error.hpp"

namespace gbzk {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

inline double parity(int k, int l) { return ((k + l) & 1) ? -1.0 : 1.0; }

}  // namespace

struct FourierTransform::Plan {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

FourierTransform::FourierTransform(const GridSpec& grid) : grid_(grid), plan_(std::make_unique<Plan>()) {
  std::lock_guard lock(planner_mutex());
  plan_->buf = fftw_alloc_complex(grid.size());
  // ESTIMATE keeps the plan, and therefore every output bit, independent of timing.
  plan_->fwd = fftw_plan_dft_2d(grid.ny(), grid.nx(), plan_->buf, plan_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_->inv = fftw_plan_dft_2d(grid.ny(), grid.nx(), plan_->buf, plan_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan_->fwd);
  fftw_destroy_plan(plan_->inv);
  fftw_free(plan_->buf);
}

void FourierTransform::forward(const RealField2D& in, SpectralField2D& out) {
  if (!(in.grid == grid_)) throw SizeMismatch("forward transform: grid mismatch");
  const int nx = grid_.nx(), ny = grid_.ny();
  fftw_complex* b = plan_->buf;
  for (std::size_t n = 0; n < grid_.size(); ++n) {
    b[n][0] = in.samples[n];
    b[n][1] = 0.0;
  }
  fftw_execute(plan_->fwd);
  if (!(out.grid == grid_)) out = SpectralField2D(grid_);
  // Centred coordinates x_i = -lx/2 + i dx contribute the factor (-1)^(k+l).
  const double w = grid_.area_element();
  for (int l = 0; l < ny; ++l)
    for (int k = 0; k < nx; ++k) {
      const std::size_t n = static_cast<std::size_t>(l) * nx + k;
      const double s = w * parity(k, l);
      out.coeffs[n] = cplx(s * b[n][0], s * b[n][1]);
    }
}

void FourierTransform::inverse_complex(const SpectralField2D& in, std::vector<cplx>& out) {
  if (!(in.grid == grid_)) throw SizeMismatch("inverse transform: grid mismatch");
  const int nx = grid_.nx(), ny = grid_.ny();
  fftw_complex* b = plan_->buf;
  const double w = 1.0 / (grid_.lx() * grid_.ly());
  for (int l = 0; l < ny; ++l)
    for (int k = 0; k < nx; ++k) {
      const std::size_t n = static_cast<std::size_t>(l) * nx + k;
      const double s = w * parity(k, l);
      b[n][0] = s * in.coeffs[n].real();
      b[n][1] = s * in.coeffs[n].imag();
    }
  fftw_execute(plan_->inv);
  out.resize(grid_.size());
  for (std::size_t n = 0; n < grid_.size(); ++n) out[n] = cplx(b[n][0], b[n][1]);
}

void FourierTransform::inverse(const SpectralField2D& in, RealField2D& out) {
  if (!(in.grid == grid_)) throw SizeMismatch("inverse transform: grid mismatch");
  const int nx = grid_.nx(), ny = grid_.ny();
  fftw_complex* b = plan_->buf;
  const double w = 1.0 / (grid_.lx() * grid_.ly());
  for (int l = 0; l < ny; ++l)
    for (int k = 0; k < nx; ++k) {
      const std::size_t n = static_cast<std::size_t>(l) * nx + k;
      const double s = w * parity(k, l);
      b[n][0] = s * in.coeffs[n].real();
      b[n][1] = s * in.coeffs[n].imag();
    }
  fftw_execute(plan_->inv);
  if (!(out.grid == grid_)) out = RealField2D(grid_);
  for (std::size_t n = 0; n < grid_.size(); ++n) out.samples[n] = b[n][0];
}

namespace {

FourierTransform& cached_transform(const GridSpec& g) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FourierTransform>> cache;
  auto& slot = cache[{g.nx(), g.ny()}];
  if (!slot || !(slot->grid() == g)) slot = std::make_unique<FourierTransform>(g);
  return *slot;
}

}  // namespace

SpectralField2D to_spectral(const RealField2D& u) {
  if (u.samples.size() != u.grid.size()) throw SizeMismatch("to_spectral: sample count mismatch");
  SpectralField2D out(u.grid);
  cached_transform(u.grid).forward(u, out);
  return out;
}

RealField2D to_physical(const SpectralField2D& u) {
  if (u.coeffs.size() != u.grid.size()) throw SizeMismatch("to_physical: coefficient count mismatch");
  RealField2D out(u.grid);
  cached_transform(u.grid).inverse(u, out);
  return out;
}

double imaginary_residue(const SpectralField2D& u) {
  std::vector<cplx> z;
  cached_transform(u.grid).inverse_complex(u, z);
  double re = 0.0, im = 0.0;
  for (const cplx& v : z) {
    re = std::max(re, std::abs(v.real()));
    im = std::max(im, std::abs(v.imag()));
  }
  return re > 0.0 ? im / re : im;
}

SpectralField2D fractional_x_derivative(const SpectralField2D& f, double z) {
  if (!(z > 0.0)) throw InvalidArgument("fractional_x_derivative: order must be positive");
  return apply_multiplier(f, [z](double xi, double, int, int) {
    return cplx(xi == 0.0 ? 0.0 : std::pow(std::abs(xi), z), 0.0);
  });
}

SpectralField2D fractional_y_derivative(const SpectralField2D& f, double z) {
  if (!(z > 0.0)) throw InvalidArgument("fractional_y_derivative: order must be positive");
  return apply_multiplier(f, [z](double, double eta, int, int) {
    return cplx(eta == 0.0 ? 0.0 : std::pow(std::abs(eta), z), 0.0);
  });
}

SpectralField2D bessel_potential(const SpectralField2D& f, double s, Axis axis) {
  return apply_multiplier(f, [s, axis](double xi, double eta, int, int) {
    double q = 1.0;
    if (axis != Axis::y) q += xi * xi;
    if (axis != Axis::x) q += eta * eta;
    return cplx(std::pow(q, 0.5 * s), 0.0);
  });
}

SpectralField2D hilbert_x(const SpectralField2D& f) {
  const GridSpec& g = f.grid;
  return apply_multiplier(f, [&g](double xi, double, int k, int) {
    if (xi == 0.0 || g.is_x_nyquist(k)) return cplx{};
    return cplx(0.0, xi > 0.0 ? -1.0 : 1.0);
  });
}

SpectralField2D derivative_x(const SpectralField2D& f) {
  const GridSpec& g = f.grid;
  return apply_multiplier(f, [&g](double xi, double, int k, int) {
    return g.is_x_nyquist(k) ? cplx{} : cplx(0.0, xi);
  });
}

SpectralField2D derivative_y(const SpectralField2D& f) {
  const GridSpec& g = f.grid;
  return apply_multiplier(f, [&g](double, double eta, int, int l) {
    return g.is_y_nyquist(l) ? cplx{} : cplx(0.0, eta);
  });
}

void dealias_in_place(SpectralField2D& f) {
  const GridSpec& g = f.grid;
  // |k| > n/3  <=>  3|k| > n, kept in integers to avoid rounding at the cut.
  for (int l = 0; l < g.ny(); ++l) {
    const bool drop_row = 3 * std::abs(g.signed_ky(l)) > g.ny();
    for (int k = 0; k < g.nx(); ++k)
      if (drop_row || 3 * std::abs(g.signed_kx(k)) > g.nx()) f.at_index(k, l) = cplx{};
  }
}

SpectralField2D dealias(const SpectralField2D& f) {
  SpectralField2D out = f;
  dealias_in_place(out);
  return out;
}

double l2_norm(const RealField2D& u) {
  double s = 0.0;
  for (double v : u.samples) s += v * v;
  return std::sqrt(s * u.grid.area_element());
}

double l2_norm(const SpectralField2D& u) {
  double s = 0.0;
  for (const cplx& c : u.coeffs) s += std::norm(c);
  return std::sqrt(s / (u.grid.lx() * u.grid.ly()));
}

}  // namespace gbzk
