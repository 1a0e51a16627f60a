#include "gbzk/solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "gbzk/spectral.hpp"

namespace gbzk {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr int kContourPoints = 32;
constexpr double kBlowUpFactor = 1e6;

struct EtdCoefficients {
  cplx q, f1, f2, f3;
};

// Contour means of the ETDRK4 phi-type functions at z = dt L (radius-1 circle).
EtdCoefficients etd_coefficients(cplx z, double dt) {
  cplx q{}, f1{}, f2{}, f3{};
  for (int j = 0; j < kContourPoints; ++j) {
    const double th = 2.0 * std::numbers::pi * (j + 0.5) / kContourPoints;
    const cplx w = z + std::polar(1.0, th);
    const cplx ew = std::exp(w), eh = std::exp(0.5 * w);
    const cplx w3 = w * w * w;
    q += (eh - 1.0) / w;
    f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
    f2 += (2.0 + w + ew * (w - 2.0)) / w3;
    f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
  }
  const double s = dt / kContourPoints;
  return {q * s, f1 * s, f2 * s, f3 * s};
}

}  // namespace

void SolverConfig::validate() const {
  DispersionParams::checked(params.a);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("solver: dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("solver: T must be positive");
  if (dt > T) throw InvalidArgument("solver: dt must not exceed T");
}

long SolverConfig::steps() const { return std::max(1L, std::lround(T / dt)); }

struct Stepper::Impl {
  GridSpec g;
  SolverConfig cfg;
  int nh = 0;
  std::size_t hsize = 0;

  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  std::vector<cplx> to_phys;   // parity / (lx ly)
  std::vector<cplx> nl_factor;  // -1/2 i xi dx dy parity, masked
  std::vector<cplx> e, e2;
  std::vector<cplx> q, f1, f2, f3;

  std::vector<cplx> v, prev, na, nb, nc, nv, sa, sb, sc;
  bool cached_u = false;  // rbuf holds the physical image of v
  double blowup_limit = std::numeric_limits<double>::infinity();

  Impl(const GridSpec& grid, const SolverConfig& c) : g(grid), cfg(c) {
    nh = g.nx() / 2 + 1;
    hsize = static_cast<std::size_t>(g.ny()) * nh;
    {
      std::lock_guard lock(planner_mutex());
      rbuf = fftw_alloc_real(g.size());
      cbuf = fftw_alloc_complex(hsize);
      r2c = fftw_plan_dft_r2c_2d(g.ny(), g.nx(), rbuf, cbuf, FFTW_ESTIMATE);
      c2r = fftw_plan_dft_c2r_2d(g.ny(), g.nx(), cbuf, rbuf, FFTW_ESTIMATE);
    }
    to_phys.resize(hsize);
    nl_factor.resize(hsize);
    const double area = g.area_element();
    const double inv = 1.0 / (g.lx() * g.ly());
    const std::vector<double> omega = lattice_phase_rates(g, cfg.params);
    e.resize(hsize);
    e2.resize(hsize);
    if (cfg.integrator == Integrator::etdrk4) {
      q.resize(hsize);
      f1.resize(hsize);
      f2.resize(hsize);
      f3.resize(hsize);
    }
    for (int l = 0; l < g.ny(); ++l) {
      const bool drop_row = cfg.dealias && 3 * std::abs(g.signed_ky(l)) > g.ny();
      for (int k = 0; k < nh; ++k) {
        const std::size_t n = idx(k, l);
        const double par = ((k + l) & 1) ? -1.0 : 1.0;
        to_phys[n] = par * inv;
        const bool drop = drop_row || (cfg.dealias && 3 * k > g.nx()) || g.is_x_nyquist(k);
        nl_factor[n] = drop ? cplx{} : cplx(0.0, -0.5 * g.xi(k) * area * par);
        const double w = omega[static_cast<std::size_t>(l) * g.nx() + k];
        e[n] = std::polar(1.0, cfg.dt * w);
        e2[n] = std::polar(1.0, 0.5 * cfg.dt * w);
        if (cfg.integrator == Integrator::etdrk4) {
          const EtdCoefficients c = etd_coefficients(cplx(0.0, cfg.dt * w), cfg.dt);
          q[n] = c.q;
          f1[n] = c.f1;
          f2[n] = c.f2;
          f3[n] = c.f3;
        }
      }
    }
    for (auto* w : {&v, &prev, &na, &nb, &nc, &nv, &sa, &sb, &sc}) w->assign(hsize, cplx{});
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }

  std::size_t idx(int k, int l) const { return static_cast<std::size_t>(l) * nh + k; }

  void physical_into_rbuf(const std::vector<cplx>& s) {
    for (std::size_t n = 0; n < hsize; ++n) {
      const cplx c = s[n] * to_phys[n];
      cbuf[n][0] = c.real();
      cbuf[n][1] = c.imag();
    }
    fftw_execute(c2r);
  }

  // out = N(s); reuses rbuf when it already holds the image of s.
  void nonlinear(const std::vector<cplx>& s, std::vector<cplx>& out, bool have_u = false) {
    if (!have_u) physical_into_rbuf(s);
    for (std::size_t n = 0; n < g.size(); ++n) rbuf[n] *= rbuf[n];
    fftw_execute(r2c);
    for (std::size_t n = 0; n < hsize; ++n) out[n] = cplx(cbuf[n][0], cbuf[n][1]) * nl_factor[n];
  }

  void check(double t) {
    bool finite = true;
    double umax = 0.0;
    if (cfg.nonlinear) {
      physical_into_rbuf(v);
      cached_u = true;
      for (std::size_t n = 0; n < g.size(); ++n) {
        const double a = std::abs(rbuf[n]);
        if (!std::isfinite(a)) finite = false;
        umax = std::max(umax, a);
      }
    } else {
      for (const cplx& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) finite = false;
    }
    if (finite && !(umax > blowup_limit)) return;
    int kk = 0, ll = 0;
    double best = -1.0;
    for (int l = 0; l < g.ny(); ++l)
      for (int k = 0; k < nh; ++k) {
        const std::size_t n = idx(k, l);
        const double cur = std::abs(v[n]);
        const double growth = std::isfinite(cur) ? cur - std::abs(prev[n]) : std::numeric_limits<double>::infinity();
        if (growth > best) {
          best = growth;
          kk = g.signed_kx(k);
          ll = g.signed_ky(l);
        }
      }
    v = prev;
    cached_u = false;
    std::string why = finite ? "max|u| exceeded " + std::to_string(kBlowUpFactor) + " x initial maximum"
                             : "non-finite values in state";
    throw BlowUpError("blow-up at t = " + std::to_string(t) + ": " + why + " (max growth at mode " +
                          std::to_string(kk) + ", " + std::to_string(ll) + ")",
                      t, kk, ll);
  }

  void step_etdrk4() {
    nonlinear(v, nv, cached_u);
    cached_u = false;
    for (std::size_t n = 0; n < hsize; ++n) sa[n] = e2[n] * v[n] + q[n] * nv[n];
    nonlinear(sa, na);
    for (std::size_t n = 0; n < hsize; ++n) sb[n] = e2[n] * v[n] + q[n] * na[n];
    nonlinear(sb, nb);
    for (std::size_t n = 0; n < hsize; ++n) sc[n] = e2[n] * sa[n] + q[n] * (2.0 * nb[n] - nv[n]);
    nonlinear(sc, nc);
    for (std::size_t n = 0; n < hsize; ++n)
      v[n] = e[n] * v[n] + f1[n] * nv[n] + 2.0 * f2[n] * (na[n] + nb[n]) + f3[n] * nc[n];
  }

  void step_strang() {
    const double dt = cfg.dt;
    for (std::size_t n = 0; n < hsize; ++n) v[n] *= e2[n];
    nonlinear(v, nv);
    for (std::size_t n = 0; n < hsize; ++n) sa[n] = v[n] + 0.5 * dt * nv[n];
    nonlinear(sa, na);
    for (std::size_t n = 0; n < hsize; ++n) sb[n] = v[n] + 0.5 * dt * na[n];
    nonlinear(sb, nb);
    for (std::size_t n = 0; n < hsize; ++n) sc[n] = v[n] + dt * nb[n];
    nonlinear(sc, nc);
    for (std::size_t n = 0; n < hsize; ++n)
      v[n] = e2[n] * (v[n] + dt / 6.0 * (nv[n] + 2.0 * na[n] + 2.0 * nb[n] + nc[n]));
  }
};

Stepper::Stepper(const GridSpec& grid, const SolverConfig& cfg) {
  cfg.validate();
  impl_ = std::make_unique<Impl>(grid, cfg);
}

Stepper::~Stepper() = default;

void Stepper::load(const SpectralField2D& full) {
  Impl& m = *impl_;
  if (!(full.grid == m.g) || full.coeffs.size() != m.g.size()) throw SizeMismatch("stepper: grid mismatch");
  for (int l = 0; l < m.g.ny(); ++l)
    for (int k = 0; k < m.nh; ++k) m.v[m.idx(k, l)] = full.at_index(k, l);
  m.cached_u = false;
}

SpectralField2D Stepper::state() const {
  const Impl& m = *impl_;
  SpectralField2D out(m.g);
  const int nx = m.g.nx(), ny = m.g.ny();
  for (int l = 0; l < ny; ++l) {
    for (int k = 0; k < m.nh; ++k) out.at_index(k, l) = m.v[m.idx(k, l)];
    const int lm = (ny - l) % ny;
    for (int k = m.nh; k < nx; ++k) out.at_index(k, l) = std::conj(m.v[m.idx(nx - k, lm)]);
  }
  return out;
}

RealField2D Stepper::physical() {
  Impl& m = *impl_;
  m.physical_into_rbuf(m.v);
  m.cached_u = true;
  RealField2D u(m.g);
  std::copy(m.rbuf, m.rbuf + m.g.size(), u.samples.begin());
  return u;
}

void Stepper::set_blowup_reference(double initial_max) {
  impl_->blowup_limit =
      initial_max > 0.0 ? kBlowUpFactor * initial_max : std::numeric_limits<double>::infinity();
}

void Stepper::step() {
  Impl& m = *impl_;
  m.prev = m.v;
  const double t_next = static_cast<double>(index_ + 1) * m.cfg.dt;
  if (!m.cfg.nonlinear) {
    for (std::size_t n = 0; n < m.hsize; ++n) m.v[n] *= m.e[n];
    m.cached_u = false;
  } else if (m.cfg.integrator == Integrator::etdrk4) {
    m.step_etdrk4();
  } else {
    m.step_strang();
  }
  m.check(t_next);
  ++index_;
  time_ = t_next;
}

SpectralField2D step(const SpectralField2D& state, const SolverConfig& cfg) {
  Stepper s(state.grid, cfg);
  s.load(state);
  s.step();
  return s.state();
}

SpectralField2D nonlinear_term(const RealField2D& u, bool dealias) {
  const GridSpec& g = u.grid;
  RealField2D sq(g);
  for (std::size_t n = 0; n < g.size(); ++n) sq.samples[n] = u.samples[n] * u.samples[n];
  SpectralField2D out = derivative_x(to_spectral(sq));
  for (cplx& c : out.coeffs) c *= -0.5;
  for (int l = 0; l < g.ny(); ++l) out.at_index(0, l) = cplx{};
  if (dealias) dealias_in_place(out);
  return out;
}

Trajectory evolve(const RealField2D& initial, const SolverConfig& cfg, const EvolveOptions& opts) {
  cfg.validate();
  Stepper s(initial.grid, cfg);
  s.load(to_spectral(initial));
  s.set_blowup_reference(initial.max_abs());
  Trajectory traj;
  const long n = cfg.steps();
  const long stride = std::max(1L, opts.stride);
  auto observe = [&](bool force) {
    const long i = s.step_index();
    if (i % stride == 0 || force) {
      traj.times.push_back(s.time());
      if (opts.observer) opts.observer(s.time(), s.state());
    }
    if (opts.snapshot_stride > 0 && (i % opts.snapshot_stride == 0 || force))
      traj.snapshots.emplace_back(s.time(), s.physical());
  };
  observe(false);
  for (long i = 1; i <= n; ++i) {
    try {
      s.step();
    } catch (const BlowUpError& e) {
      const double t = s.time();
      throw EvolveBlowUp(e, s.physical(), t);
    }
    observe(i == n);
  }
  traj.final_state = s.state();
  return traj;
}

}  // namespace gbzk
