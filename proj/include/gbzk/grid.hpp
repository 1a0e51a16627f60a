#pragma once

#include <cstddef>
#include <vector>

namespace gbzk {

/// Periodic box [-lx/2, lx/2) x [-ly/2, ly/2) sampled on an nx-by-ny lattice.
///
/// Samples are stored row-major with y outer and x inner. Spectral arrays use
/// the same layout in FFT index order: index k in [0, nx) corresponds to the
/// signed wavenumber k for k < nx/2 and k - nx otherwise, so the lattice
/// contains the single unpaired Nyquist mode -nx/2.
class GridSpec {
 public:
  GridSpec() = default;

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

  double dx() const noexcept { return lx_ / nx_; }
  double dy() const noexcept { return ly_ / ny_; }
  double area_element() const noexcept { return dx() * dy(); }

  double x(int i) const noexcept { return -0.5 * lx_ + i * dx(); }
  double y(int j) const noexcept { return -0.5 * ly_ + j * dy(); }

  int signed_kx(int k) const noexcept { return k < nx_ / 2 ? k : k - nx_; }
  int signed_ky(int l) const noexcept { return l < ny_ / 2 ? l : l - ny_; }
  int index_kx(int k) const noexcept { return k >= 0 ? k : k + nx_; }
  int index_ky(int l) const noexcept { return l >= 0 ? l : l + ny_; }

  double xi(int k) const noexcept;   // by FFT index
  double eta(int l) const noexcept;  // by FFT index
  double dxi() const noexcept;
  double deta() const noexcept;

  bool is_x_nyquist(int k) const noexcept { return k == nx_ / 2; }
  bool is_y_nyquist(int l) const noexcept { return l == ny_ / 2; }

  /// Signed-order lattices {-n/2, ..., n/2-1} scaled to wavenumbers.
  std::vector<double> xi_lattice() const;
  std::vector<double> eta_lattice() const;
  std::vector<double> x_coords() const;
  std::vector<double> y_coords() const;

  bool operator==(const GridSpec&) const = default;

 private:
  friend GridSpec make_grid(int nx, int ny, double lx, double ly);
  int nx_ = 0;
  int ny_ = 0;
  double lx_ = 0.0;
  double ly_ = 0.0;
};

/// Throws InvalidArgument unless nx, ny are even and >= 8 and lx, ly > 0.
GridSpec make_grid(int nx, int ny, double lx, double ly);

}  // namespace gbzk
