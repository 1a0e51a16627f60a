#include "gbzk/diagnostics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "gbzk/error.hpp"
#include "gbzk/fit.hpp"
#include "gbzk/spectral.hpp"

namespace gbzk {

namespace {

using boost::math::quadrature::gauss;

inline double bracket(double x) { return std::sqrt(1.0 + x * x); }
inline double bracket_d1(double x) { return x / bracket(x); }
inline double bracket_d2(double x) { return 1.0 / std::pow(1.0 + x * x, 1.5); }

inline double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
inline double smoothstep5_d1(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

inline double cut(double s) { return s >= 1.0 ? 0.0 : 1.0 - smoothstep5(std::max(s, 0.0)); }
inline double cut_d1(double s) { return (s <= 0.0 || s >= 1.0) ? 0.0 : -smoothstep5_d1(s); }

// <N> + integral over [N, x] of <t>' m((t - N) / width).
double blend_integral(double N, double width, double x) {
  if (x <= N) return bracket(N);
  const double end = std::min(x, N + width);
  const double v = gauss<double, 30>::integrate([&](double t) { return bracket_d1(t) * cut((t - N) / width); },
                                                N, end);
  return bracket(N) + v;
}

}  // namespace

TruncatedWeight::TruncatedWeight(double N) : n_(N) {
  if (!(N > 0.0)) throw InvalidArgument("truncated weight: N must be positive");
  if (infinite()) return;
  if (2.0 * N < bracket(N))
    throw InvalidArgument("truncated weight: N must be at least 1/sqrt(3) so that 2N >= <N>");
  const double target = 2.0 * N;
  if (target - bracket(N) <= 0.0) {
    sigma_ = 0.0;
    return;
  }
  auto f = [&](double s) { return blend_integral(N, 2.0 * N * s, N + 2.0 * N * s) - target; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, 1e-300, 1.0, tol, iters);
  sigma_ = 0.5 * (r.first + r.second);
}

double TruncatedWeight::blend(double x) const { return blend_integral(n_, 2.0 * n_ * sigma_, x); }

double TruncatedWeight::value(double x) const {
  const double ax = std::abs(x);
  if (infinite() || ax <= n_) return bracket(ax);
  if (ax >= n_ * (1.0 + 2.0 * sigma_)) return 2.0 * n_;
  return blend(ax);
}

double TruncatedWeight::d1(double x) const {
  const double ax = std::abs(x);
  const double sg = x < 0.0 ? -1.0 : 1.0;
  if (infinite() || ax <= n_) return bracket_d1(x);
  const double width = 2.0 * n_ * sigma_;
  return sg * bracket_d1(ax) * cut((ax - n_) / width);
}

double TruncatedWeight::d2(double x) const {
  const double ax = std::abs(x);
  if (infinite() || ax <= n_) return bracket_d2(x);
  const double width = 2.0 * n_ * sigma_;
  const double s = (ax - n_) / width;
  return bracket_d2(ax) * cut(s) + bracket_d1(ax) * cut_d1(s) / width;
}

double truncated_weight(double x, double N) { return TruncatedWeight(N).value(x); }

double truncated_weight_curvature_constant(double N, int samples) {
  const TruncatedWeight w(N);
  double c = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = 4.0 * N * i / samples;
    c = std::max(c, std::abs(w.d2(x)) / bracket_d2(x));
  }
  return c;
}

namespace {

std::vector<double> weight_table(const std::vector<double>& coords, double r, double N) {
  std::vector<double> out(coords.size(), 1.0);
  if (r == 0.0) return out;
  const TruncatedWeight w(N);
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = std::pow(w.value(coords[i]), 2.0 * r);
  return out;
}

}  // namespace

double weighted_norm(const RealField2D& u, const WeightSpec& spec) {
  if (spec.r1 < 0.0 || spec.r2 < 0.0) throw InvalidArgument("weighted_norm: exponents must be nonnegative");
  const GridSpec& g = u.grid;
  const std::vector<double> wx = weight_table(g.x_coords(), spec.r1, spec.N);
  const std::vector<double> wy = weight_table(g.y_coords(), spec.r2, spec.N);
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double v = u.at(i, j);
      s += (wx[i] + wy[j]) * v * v;
    }
  return std::sqrt(s * g.area_element());
}

double weighted_norm_x(const RealField2D& u, double r1, double N) {
  const GridSpec& g = u.grid;
  const std::vector<double> wx = weight_table(g.x_coords(), r1, N);
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) s += wx[i] * u.at(i, j) * u.at(i, j);
  return std::sqrt(s * g.area_element());
}

double weighted_norm_y(const RealField2D& u, double r2, double N) {
  const GridSpec& g = u.grid;
  const std::vector<double> wy = weight_table(g.y_coords(), r2, N);
  double s = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) s += wy[j] * u.at(i, j) * u.at(i, j);
  return std::sqrt(s * g.area_element());
}

double bessel_norm(const SpectralField2D& u, double s, Axis axis) {
  const GridSpec& g = u.grid;
  double acc = 0.0;
  for (int l = 0; l < g.ny(); ++l) {
    const double eta = g.eta(l);
    for (int k = 0; k < g.nx(); ++k) {
      const double xi = g.xi(k);
      double q = 1.0;
      if (axis != Axis::y) q += xi * xi;
      if (axis != Axis::x) q += eta * eta;
      acc += std::pow(q, s) * std::norm(u.at_index(k, l));
    }
  }
  return std::sqrt(acc / (g.lx() * g.ly()));
}

double sobolev_norm(const SpectralField2D& u, const SobolevSpec& spec) {
  const double a = l2_norm(u), bx = bessel_norm(u, spec.s1, Axis::x), by = bessel_norm(u, spec.s2, Axis::y);
  return std::sqrt(a * a + bx * bx + by * by);
}

double sobolev_norm(const RealField2D& u, const SobolevSpec& spec) { return sobolev_norm(to_spectral(u), spec); }

double mass(const SpectralField2D& u) {
  const double n = l2_norm(u);
  return n * n;
}

double mass(const RealField2D& u) { return mass(to_spectral(u)); }

double hamiltonian(const RealField2D& u, const SpectralField2D& spec, const DispersionParams& params) {
  const GridSpec& g = u.grid;
  double quad = 0.0;
  for (int l = 0; l < g.ny(); ++l) {
    const double eta = g.eta(l);
    for (int k = 0; k < g.nx(); ++k) {
      const double xi = g.xi(k);
      const double dx = xi == 0.0 ? 0.0 : std::pow(std::abs(xi), 1.0 + params.a);
      quad += (dx - eta * eta) * std::norm(spec.at_index(k, l));
    }
  }
  quad /= g.lx() * g.ly();
  double cube = 0.0;
  for (double v : u.samples) cube += v * v * v;
  return quad + cube * g.area_element() / 3.0;
}

double hamiltonian(const RealField2D& u, const DispersionParams& params) {
  return hamiltonian(u, to_spectral(u), params);
}

std::vector<cplx> zero_mode_slice(const SpectralField2D& u) {
  std::vector<cplx> out(u.grid.ny());
  for (int l = 0; l < u.grid.ny(); ++l) out[l] = u.at_index(0, l);
  return out;
}

std::vector<cplx> zero_mode_slice(const RealField2D& u) { return zero_mode_slice(to_spectral(u)); }

double zero_mode_max_deviation(const SpectralField2D& u, const std::vector<cplx>& reference) {
  if (reference.size() != static_cast<std::size_t>(u.grid.ny()))
    throw SizeMismatch("zero_mode_max_deviation: reference length mismatch");
  double m = 0.0;
  for (int l = 0; l < u.grid.ny(); ++l) m = std::max(m, std::abs(u.at_index(0, l) - reference[l]));
  return m;
}

double boundary_ratio(const RealField2D& u) {
  const GridSpec& g = u.grid;
  const double peak = u.max_abs();
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (int i = 0; i < g.nx(); ++i) edge = std::max({edge, std::abs(u.at(i, 0)), std::abs(u.at(i, g.ny() - 1))});
  for (int j = 0; j < g.ny(); ++j) edge = std::max({edge, std::abs(u.at(0, j)), std::abs(u.at(g.nx() - 1, j))});
  return edge / peak;
}

XMoment x_moment(const RealField2D& u, double eta) {
  const GridSpec& g = u.grid;
  cplx s{};
  for (int j = 0; j < g.ny(); ++j) {
    double row = 0.0;
    for (int i = 0; i < g.nx(); ++i) row += g.x(i) * u.at(i, j);
    s += std::polar(row, -eta * g.y(j));
  }
  const double br = boundary_ratio(u);
  return {s * g.area_element(), br, br < 1e-12};
}

InterxResult interx_probe(double alpha, double beta, double b, const std::vector<double>& N_values,
                          const std::vector<int>& resolutions, double L) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("interx_probe: beta must lie in (0, 1)");
  if (N_values.size() < 2 || resolutions.size() < 2) throw InvalidArgument("interx_probe: need two ladders");
  struct Member {
    double c, s, kx;
  };
  const Member family[] = {{0.0, 1.0, 0.0}, {1.5, 0.7, 0.0}, {-2.0, 1.3, 0.0}, {0.0, 0.8, 2.0},
                           {3.0, 1.0, 1.0}, {-1.0, 0.5, 0.0}, {0.5, 2.0, 0.5}, {2.5, 0.6, 3.0}};
  InterxResult res;
  res.N_values = N_values;
  res.resolutions = resolutions;
  for (int n : resolutions) {
    const GridSpec g = make_grid(n, 8, L, 8.0);
    std::vector<double> row;
    for (double N : N_values) {
      const TruncatedWeight w(N);
      double worst = 0.0;
      for (const Member& m : family) {
        const RealField2D f = sample(g, [&](double x, double y) {
          const double d = (x - m.c) / m.s;
          return std::exp(-0.5 * d * d - 0.5 * y * y) * std::cos(m.kx * x);
        });
        RealField2D inner(g), outer(g);
        for (int j = 0; j < g.ny(); ++j)
          for (int i = 0; i < g.nx(); ++i) {
            const double wx = w.value(g.x(i));
            inner.at(i, j) = std::pow(wx, (1.0 - beta) * b) * f.at(i, j);
            outer.at(i, j) = std::pow(wx, b) * f.at(i, j);
          }
        const double lhs = bessel_norm(to_spectral(inner), alpha * beta, Axis::x);
        const double rhs = std::pow(l2_norm(outer), 1.0 - beta) * std::pow(bessel_norm(to_spectral(f), alpha, Axis::x), beta);
        worst = std::max(worst, lhs / rhs);
      }
      row.push_back(worst);
    }
    res.ratio.push_back(std::move(row));
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    lx.push_back(N_values[i]);
    ly.push_back(res.ratio.back()[i]);
  }
  res.slope_vs_N = std::abs(fit_exponent(lx, ly, FitScale::loglog, 2).slope);
  double worst = 0.0;
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    std::vector<double> rx, ry;
    for (std::size_t r = 0; r < resolutions.size(); ++r) {
      rx.push_back(resolutions[r]);
      ry.push_back(res.ratio[r][i]);
    }
    worst = std::max(worst, std::abs(fit_exponent(rx, ry, FitScale::loglog, 2).slope));
  }
  res.slope_vs_refinement = worst;
  return res;
}

}  // namespace gbzk
