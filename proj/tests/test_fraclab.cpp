#include <fftw3.h>

#include <cmath>
#include <functional>

#include "doctest.h"
#include "gbzk/error.hpp"
#include "gbzk/fraclab.hpp"

using namespace gbzk;

namespace {

// Brute force: s = u^4 on [0, S], composite Simpson in long double, plus the tail
// 2 |f(x)|^2 S^{-2b} / (2b) where f(x +- s) has decayed.
double brute_stein_squared(const std::function<double(double)>& f, double b, double x, double S = 30.0,
                           int M = 200000) {
  const long double U = std::pow(static_cast<long double>(S), 0.25L);
  const long double fx = f(x);
  auto g = [&](long double u) -> long double {
    if (u == 0.0L) return 0.0L;
    const long double s = u * u * u * u;
    const long double dp = f(static_cast<double>(x + s)) - fx, dm = f(static_cast<double>(x - s)) - fx;
    return 4.0L * (dp * dp + dm * dm) * std::pow(u, -1.0L - 8.0L * b);
  };
  const long double h = U / M;
  long double acc = g(0.0L) + g(U);
  for (int i = 1; i < M; ++i) acc += (i % 2 ? 4.0L : 2.0L) * g(i * h);
  acc *= h / 3.0L;
  acc += fx * fx * std::pow(static_cast<long double>(S), -2.0L * b) / b;
  return static_cast<double>(acc);
}

// C_b^2 = integral |1 - e^{iu}|^2 |u|^{-1-2b} du = -4 Gamma(-2b) cos(pi b), with limit 2 pi at b = 1/2
double plane_wave_constant_squared(double b) {
  if (std::abs(b - 0.5) < 1e-12) return 2.0 * M_PI;
  return -4.0 * std::tgamma(-2.0 * b) * std::cos(M_PI * b);
}

double phi(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  const double p = std::exp(-1.0 / (2.0 - ax)), q = std::exp(-1.0 / (ax - 1.0));
  return p / (p + q);
}

double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("cutoff") {
  CHECK(cutoff_phi(0.5) == 1.0);
  CHECK(cutoff_phi(-2.5) == 0.0);
  for (double x : {1.1, 1.5, -1.9}) CHECK(cutoff_phi(x) == doctest::Approx(phi(x)).epsilon(1e-14));
}

TEST_CASE("brute-force agreement on Gaussians") {
  const SteinTarget g = gaussian_target(1.0, 0.0, 1.0);
  for (double b : {0.25, 0.5, 0.75})
    for (double x : {0.0, 0.4, 1.3, 2.5}) {
      const double ref = brute_stein_squared([](double y) { return std::exp(-y * y); }, b, x);
      const SteinValue v = stein_derivative(g, b, x);
      CHECK(v.converged);
      CHECK(v.squared == doctest::Approx(ref).epsilon(1e-6));
      CHECK(v.value == doctest::Approx(std::sqrt(v.squared)));
    }
}

TEST_CASE("brute-force agreement on a kinked profile") {
  const SteinTarget p = power_profile(1.0);
  for (double b : {0.25, 0.5})
    for (double x : {0.3, 1.5}) {
      const double ref = brute_stein_squared([](double y) { return std::abs(y) * phi(y); }, b, x, 30.0, 400000);
      CHECK(stein_derivative(p, b, x).squared == doctest::Approx(ref).epsilon(1e-5));
    }
}

TEST_CASE("scaling identity for a user target") {
  // D^b [f(lam .)](x) = lam^b (D^b f)(lam x)
  auto base = [](double y) { return (1.0 + y) * std::exp(-y * y); };
  SteinTarget f;
  f.f = [&](double y) { return cplx(base(y), 0.0); };
  for (double lam : {0.5, 2.0, 3.0}) {
    SteinTarget fl;
    fl.f = [=](double y) { return cplx(base(lam * y), 0.0); };
    for (double b : {0.3, 0.7})
      for (double x : {0.0, 0.37, -1.1}) {
        const double lhs = stein_derivative(fl, b, x).value;
        const double rhs = std::pow(lam, b) * stein_derivative(f, b, lam * x).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
      }
  }
}

TEST_CASE("plane waves and the spectral constant") {
  for (double b : {0.25, 0.5, 0.75}) {
    const double c2 = plane_wave_constant_squared(b);
    CHECK(stein_spectral_constant(b) == doctest::Approx(std::sqrt(c2)).epsilon(1e-12));
    for (double k : {1.0, 3.0})
      CHECK(stein_derivative(plane_wave(k), b, 0.2).value == doctest::Approx(std::sqrt(c2) * std::pow(k, b)).epsilon(1e-6));
    // ||D^b g||^2 = C_b^2 (1/2pi) integral |xi|^{2b} pi exp(-xi^2/2) for g = exp(-x^2)
    const double spectral = 0.5 * std::tgamma(b + 0.5) * std::pow(2.0, b + 0.5);
    CHECK(stein_l2_norm_squared(gaussian_target(1.0, 0.0, 1.0), b, 64) == doctest::Approx(c2 * spectral).epsilon(1e-6));
  }
  CHECK_THROWS_AS(stein_derivative(plane_wave(1.0), 2.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(stein_derivative(plane_wave(1.0), 0.0, 0.0), InvalidArgument);
}

TEST_CASE("second differences for 1 <= b < 2") {
  CHECK_THROWS_AS(stein_derivative(plane_wave(2.0), 1.2, 0.0), InvalidArgument);
  for (double b : {1.2, 1.7}) {
    const double g = stein_derivative(gaussian_target(1.0, 0.0, 1.0), b, 0.6).squared;
    const double gb = [&] {
      // Taylor part f2 s^2 + f4 s^4 / 12 on [0, s0], Simpson in long double above s0
      const long double x = 0.6L, s0 = 1e-2L, fx = std::exp(-x * x);
      const long double f2 = (4 * x * x - 2) * fx, f4 = (16 * x * x * x * x - 48 * x * x + 12) * fx;
      auto mono = [&](long double q) { return std::pow(s0, q) / q; };
      long double acc = f2 * f2 * mono(4 - 2 * b) + f2 * f4 / 6 * mono(6 - 2 * b) + f4 * f4 / 144 * mono(8 - 2 * b);
      auto f = [](long double y) { return std::exp(-y * y); };
      auto h = [&](long double u) {
        const long double s = u * u * u * u;
        const long double d = f(x + s) + f(x - s) - 2 * fx;
        return 4 * d * d * std::pow(u, -1.0L - 8.0L * b);
      };
      const long double U0 = std::pow(s0, 0.25L), U1 = std::pow(30.0L, 0.25L);
      const int M = 200000;
      const long double du = (U1 - U0) / M;
      long double simp = h(U0) + h(U1);
      for (int i = 1; i < M; ++i) simp += (i % 2 ? 4 : 2) * h(U0 + i * du);
      acc += simp * du / 3 + 4 * fx * fx * std::pow(30.0L, -2.0L * b) / (2 * b);
      return static_cast<double>(acc);
    }();
    CHECK(g == doctest::Approx(gb).epsilon(1e-6));
  }
}

TEST_CASE("membership verdicts") {
  CHECK(l2_membership_classify(power_profile(0.5), 0.3).verdict == Membership::member);
  CHECK(l2_membership_classify(power_profile(0.5), 1.2).verdict == Membership::non_member);
  CHECK(l2_membership_classify(signed_power_profile(0.5), 0.6).verdict == Membership::member);
  CHECK(l2_membership_classify(signed_power_profile(0.5), 1.2).verdict == Membership::non_member);
  const MembershipEvidence at = l2_membership_classify(gamma_profile(0.3), 0.3);
  CHECK(at.verdict == Membership::non_member);
  CHECK(std::abs(at.exponent) < 0.02);
  CHECK(l2_membership_classify(gamma_profile(0.3), 0.2).verdict == Membership::member);
  CHECK(std::string(to_string(Membership::inconclusive)) == "inconclusive");
}

TEST_CASE("asymptotic slopes") {
  const FitResult large = stein_slope(power_profile(1.5), 0.8, 10.0, 200.0);
  CHECK(large.slope == doctest::Approx(-1.3).epsilon(0.05 / 1.3));
  const OffsetPowerFit small = stein_offset_fit(power_profile(0.3), 0.9, 1e-4, 1e-1);
  CHECK(small.exponent == doctest::Approx(-0.6).epsilon(0.05 / 0.6));
  const FitResult lg = stein_log_fit(power_profile(0.5), 0.5, 1e-4, 1e-2);
  CHECK(lg.r2 > 0.99);
}

TEST_CASE("phase lemma probes") {
  std::vector<double> tg, sg;
  for (int i = 0; i < 8; ++i) {
    tg.push_back(std::pow(10.0, i / 7.0));
    sg.push_back(2.0 * std::pow(10.0, i / 7.0));
  }
  const PhaseProbeResult p = phase_lemma_probe(PhaseLemma::P, 0.5, 0.5, tg, sg, 1.0, 2.0);
  CHECK(p.space.slope == doctest::Approx(1.0).epsilon(0.02));
  CHECK(p.time.slope == doctest::Approx(0.5).epsilon(0.04));
  CHECK(p.within_bounds);
}

TEST_CASE("ensemble is reproducible") {
  const auto a = gaussian_ensemble(5, 42), b = gaussian_ensemble(5, 42), c = gaussian_ensemble(5, 43);
  REQUIRE(a.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].amplitude == b[i].amplitude);
    CHECK(a[i].sx == b[i].sx);
    CHECK(a[i].sx > 0.0);
  }
  CHECK(a[0].x0 != c[0].x0);
}

namespace {

double df_rhs(const GaussianMember& m, double theta, double t, double a) {
  const double A2 = m.amplitude * m.amplitude, sp = std::sqrt(M_PI);
  const double n0 = std::sqrt(A2 * M_PI * m.sx * m.sy);
  auto dnorm = [&](double q, double s_on, double s_off) {
    // ||D^q f|| along the axis with width s_on: |f^|^2 = 4 pi^2 A^2 sx^2 sy^2 exp(-sx^2 xi^2 - sy^2 eta^2)
    return std::sqrt(A2 * m.sx * m.sx * m.sy * m.sy * (sp / s_off) * std::tgamma(q + 0.5) * std::pow(s_on, -2.0 * q - 1.0));
  };
  const double ny = dnorm(2.0 * theta, m.sy, m.sx);
  const double nx = dnorm((1.0 + a) * theta, m.sx, m.sy);
  auto w = [&](double x) { return std::pow(std::abs(x), 2.0 * theta) * std::exp(-(x - m.x0) * (x - m.x0) / (m.sx * m.sx)); };
  const double L = std::abs(m.x0) + 12.0 * m.sx;
  const double ix = simpson(w, -L, 0.0) + simpson(w, 0.0, L);
  const double nm = std::sqrt(A2 * ix * sp * m.sy);
  const double rho = 1.0 + std::pow(t, theta) + std::pow(t, theta / (2.0 + theta));
  return rho * (n0 + ny + nx) + nm;
}

double weighted_moment(const GaussianMember& m, double theta) {
  auto w = [&](double x) { return std::pow(std::abs(x), 2.0 * theta) * std::exp(-(x - m.x0) * (x - m.x0) / (m.sx * m.sx)); };
  const double L = std::abs(m.x0) + 12.0 * m.sx;
  return std::sqrt(m.amplitude * m.amplitude * (simpson(w, -L, 0.0) + simpson(w, 0.0, L)) * std::sqrt(M_PI) * m.sy);
}

// Row by row: ||D^theta_xi F(., eta)||^2 = C^2 (1/2 pi) integral |k|^{2 theta} |G(k)|^2 dk with G the
// inverse-direction transform of the row, evaluated by FFT on a long xi interval.
double df_lhs_oracle(const GaussianMember& m, double theta, double t, double a) {
  const int n = 1 << 16;
  const double L = 300.0;
  const double h = L / n;
  fftw_complex* buf = fftw_alloc_complex(n);
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  const double c2 = plane_wave_constant_squared(theta);
  const double H = 7.0 / m.sy;
  const int rows = 160;
  double acc = 0.0;
  for (int r = 0; r <= rows; ++r) {
    const double eta = -H + 2.0 * H * r / rows;
    const double env = m.amplitude * 2.0 * M_PI * m.sx * m.sy * std::exp(-0.5 * m.sy * m.sy * eta * eta);
    for (int i = 0; i < n; ++i) {
      const int si = i < n / 2 ? i : i - n;
      const double xi = si * h;
      const cplx v = std::polar(env * std::exp(-0.5 * m.sx * m.sx * xi * xi),
                                t * xi * (eta * eta - std::pow(std::abs(xi), 1.0 + a)) - m.x0 * xi);
      buf[i][0] = v.real();
      buf[i][1] = v.imag();
    }
    fftw_execute(plan);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const int si = i < n / 2 ? i : i - n;
      const double k = 2.0 * M_PI * si / L;
      s += std::pow(std::abs(k), 2.0 * theta) * (buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1]) * h * h;
    }
    const double row = c2 * s / L;
    acc += (r == 0 || r == rows ? 0.5 : 1.0) * row * 2.0 * H / rows;
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("DF probe against independent oracles") {
  const GaussianMember m{1.0, 0.7, 0.3, 1.0, 1.2};
  const double theta = 0.5, a = 0.5;
  // t = 0: the row transform is the x-Fourier transform, so the left side is 2 pi C ||x|^theta f||
  const DfProbeResult r0 = lemma_df_probe(theta, 0.0, a, {m}, 32);
  const double lhs0 = r0.ratios[0] * df_rhs(m, theta, 0.0, a);
  CHECK(lhs0 == doctest::Approx(2.0 * M_PI * std::sqrt(plane_wave_constant_squared(theta)) * weighted_moment(m, theta))
                    .epsilon(1e-5));
  const DfProbeResult r1 = lemma_df_probe(theta, 1.0, a, {m}, 64);
  const double lhs1 = r1.ratios[0] * df_rhs(m, theta, 1.0, a);
  CHECK(lhs1 == doctest::Approx(df_lhs_oracle(m, theta, 1.0, a)).epsilon(2e-3));
  CHECK(r1.rho == doctest::Approx(1.0 + 1.0 + 1.0));
  CHECK_THROWS_AS(lemma_df_probe(1.2, 1.0, a, {m}, 16), InvalidArgument);
}
