#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gbzk/fit.hpp"

namespace gbzk {

using cplx = std::complex<double>;

/// Even C-infinity cutoff: 1 on |x| <= 1, 0 on |x| >= 2, h(2-|x|) / (h(2-|x|) + h(|x|-1))
/// with h(s) = exp(-1/s) in between.
double cutoff_phi(double x);

/// A one-dimensional function together with what the quadrature needs to know about it.
struct SteinTarget {
  std::function<cplx(double)> f;
  std::vector<double> breakpoints;  // kinks or integrable singularities
  // f vanishes (to working accuracy) outside [-radius, radius]; infinite means unknown.
  double radius = std::numeric_limits<double>::infinity();
  bool unimodular = false;                    // |f| = 1 everywhere
  std::function<double(double)> phase_slope;  // |d arg f / dx|, enables oscillation-aware panels
  double scale = 1.0;                         // length scale of the smooth features
  std::string label;
};

SteinTarget power_profile(double alpha);         // |x|^alpha phi(x)
SteinTarget signed_power_profile(double alpha);  // sgn(x) |x|^alpha phi(x)
SteinTarget gamma_profile(double gamma);         // |x|^{gamma - 1/2} phi(x)
SteinTarget gaussian_target(double amplitude, double center, double width);  // a exp(-(x-c)^2 / w^2)
SteinTarget plane_wave(double k);                // exp(i k x)
SteinTarget dispersive_phase(double t, double a);  // exp(-i t x |x|^{1+a})

struct SteinOptions {
  double rel_tol = 1e-8;  // tail bound relative to the partial integral
  double inner_fraction = 0.01;  // inner window as a fraction of the local scale
  int max_extensions = 12;       // radius doublings for targets without known support
};

struct SteinValue {
  double value = 0.0;    // D^b f(x)
  double squared = 0.0;  // D^b f(x)^2
  double error = 0.0;    // estimate for `squared`
  bool converged = true;
};

/// Stein derivative D^b f(x) = (integral |f(x) - f(y)|^2 / |x - y|^{1+2b} dy)^{1/2} for
/// 0 < b < 1. For 1 <= b < 2 the second difference |f(x+s) + f(x-s) - 2 f(x)|^2 over
/// s in (0, inf) is used instead, which characterises the same L2-Sobolev scale.
SteinValue stein_derivative(const SteinTarget& target, double b, double x, const SteinOptions& opts = {});

/// L2 norm squared of D^b f over the line: about n Gauss-Legendre nodes on the core
/// [-1.5 radius, 1.5 radius], split at the breakpoints, and n/2 nodes on each algebraic tail.
double stein_l2_norm_squared(const SteinTarget& target, double b, int n, const SteinOptions& opts = {});

/// C_b with ||D^b f|| = C_b ||D^b f||_spectral, C_b^2 = 2 pi / (Gamma(1 + 2b) sin(pi b)).
double stein_spectral_constant(double b);

enum class ProfileKind { power, signed_power, gamma, user };

struct SteinQuery {
  ProfileKind kind = ProfileKind::power;
  double exponent = 1.0;  // alpha, or gamma for the gamma family
  double b = 0.5;
  std::vector<double> points;
  SteinTarget user;  // used when kind == user
};

SteinTarget query_target(const SteinQuery& q);
std::vector<SteinValue> dstein_profile(const SteinQuery& q, const SteinOptions& opts = {});

enum class Membership { member, non_member, inconclusive };
const char* to_string(Membership m);

struct MembershipOptions {
  int first_decade = 1;  // increments over [10^-(k+1), 10^-k], k = first..last
  int last_decade = 6;
  int nodes = 12;        // Gauss-Legendre nodes in log|eta| per decade
  double slope_band = 0.02;
};

struct MembershipEvidence {
  Membership verdict = Membership::inconclusive;
  double exponent = 0.0;      // fitted growth exponent of the per-decade increments
  double exponent_ci = 0.0;
  std::vector<double> eps;         // window edges 10^-k
  std::vector<double> increments;  // integral of D^2 over eps_{k+1} < |eta| < eps_k
  std::vector<double> partial;     // integral of D^2 over |eta| > eps_{k+1}
  double far_part = 0.0;           // integral over |eta| > 10^-first
  std::string reason;
};

/// Decides ||D^theta profile||_{L2} < inf from the behaviour of the increments of the
/// norm over nested windows shrinking to the singular point 0.
MembershipEvidence l2_membership_classify(const SteinTarget& profile, double theta,
                                          const MembershipOptions& opts = {});

struct OffsetPowerFit {
  double exponent = 0.0;  // p in D = c |eta|^p + c1
  double c = 0.0;
  double c1 = 0.0;
  FitResult residual_fit;  // log |D - c1| against log |eta|
};

/// Log-log slope of D^theta profile on [lo, hi] (n log-spaced points).
FitResult stein_slope(const SteinTarget& profile, double theta, double lo, double hi, int n = 16);
/// D^2 against log|eta| on [lo, hi]; the log case expects a linear relation.
FitResult stein_log_fit(const SteinTarget& profile, double theta, double lo, double hi, int n = 16);
/// Nonlinear fit D = c |eta|^p + c1 on [lo, hi].
OffsetPowerFit stein_offset_fit(const SteinTarget& profile, double theta, double lo, double hi, int n = 16);

enum class PhaseLemma { pontual1, P };

struct PhaseProbeResult {
  FitResult space;  // exponent in |x| (Pontual1) or eta (P)
  FitResult time;   // exponent in t
  FitResult origin; // Pontual1 only: exponent in t at x = 0
  double space_bound = 0.0;
  double time_bound = 0.0;
  double origin_expected = 0.0;
  bool within_bounds = false;
};

/// Fits growth exponents of D^b of exp(-i t x |x|^{1+a}) (Pontual1) or exp(i t eta^2 x) (P).
/// space_grid is |x| (or eta) at t = t_fixed; t_grid is t at |x| (or eta) = s_fixed.
PhaseProbeResult phase_lemma_probe(PhaseLemma kind, double b, double a, const std::vector<double>& t_grid,
                                   const std::vector<double>& space_grid, double t_fixed, double s_fixed);

struct GaussianMember {
  double amplitude, x0, y0, sx, sy;  // f = A exp(-(x-x0)^2/(2 sx^2) - (y-y0)^2/(2 sy^2))
};

std::vector<GaussianMember> gaussian_ensemble(int size, std::uint64_t seed);

struct DfProbeResult {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double rho = 1.0;
};

/// For each member, || D^theta_xi (psi f^) ||_{L2(xi, eta)} divided by
/// rho(t) (||f|| + ||D_y^{2 theta} f|| + ||D_x^{(1+a) theta} f||) + || |x|^theta f ||.
/// The Stein derivative acts row by row in xi; `resolution` Gauss-Legendre nodes per axis.
DfProbeResult lemma_df_probe(double theta, double t, double a, const std::vector<GaussianMember>& ensemble,
                             int resolution);

}  // namespace gbzk
