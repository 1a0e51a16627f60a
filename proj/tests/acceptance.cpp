// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gbzk/diagnostics.hpp"
#include "gbzk/expansion_check.hpp"
#include "gbzk/fit.hpp"
#include "gbzk/fraclab.hpp"
#include "gbzk/propagator.hpp"
#include "gbzk/reports.hpp"
#include "gbzk/scenario.hpp"
#include "gbzk/solver.hpp"
#include "gbzk/spectral.hpp"

using namespace gbzk;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-26s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_l2(const SpectralField2D& a, const SpectralField2D& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    num += std::norm(a.coeffs[i] - b.coeffs[i]);
    den += std::norm(b.coeffs[i]);
  }
  return std::sqrt(num / den);
}

double diff_l2(const SpectralField2D& a, const SpectralField2D& b) {
  SpectralField2D d = a;
  for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= b.coeffs[i];
  return l2_norm(d);
}

RealField2D gaussian_data(const GridSpec& g, double amp) {
  return sample(g, [=](double x, double y) { return amp * std::exp(-x * x - y * y); });
}

void linear_exactness() {
  const GridSpec g = make_grid(128, 128, 32.0, 32.0);
  const RealField2D u0 = sample(g, [](double x, double y) {
    return std::exp(-0.5 * (x - 1.0) * (x - 1.0) - 0.3 * y * y) * (1.0 + 0.4 * std::sin(2.0 * x + y));
  });
  double worst = 0.0, slowest = 0.0;
  for (double a : {0.0, 0.3, 0.5, 0.8, 1.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    SolverConfig c;
    c.nonlinear = false;
    c.dt = 1e-2;
    c.T = 1.0;
    c.params = DispersionParams::checked(a);
    const SpectralField2D u = evolve(u0, c).final_state;
    const SpectralField2D ref = apply_linear_propagator(to_spectral(u0), 1.0, c.params);
    slowest = std::max(slowest, seconds_since(t0));
    worst = std::max(worst, rel_l2(u, ref));
  }
  report(1, "linear exactness", worst < 1e-12 && slowest < 5.0,
         fmt("max rel L2 error %.3e (< 1e-12), slowest case %.2f s (< 5 s)", worst, slowest));
}

void conservation_and_zero_mode() {
  const GridSpec g = make_grid(256, 256, 32.0, 32.0);
  const RealField2D u0 = gaussian_data(g, 1.0);
  SolverConfig c;
  c.dt = 1e-3;
  c.T = 1.0;
  c.params = DispersionParams::checked(0.5);
  const std::vector<cplx> z0 = zero_mode_slice(u0);
  const double m0 = mass(u0), h0 = hamiltonian(u0, c.params);
  double dm = 0.0, dh = 0.0, dz = 0.0;
  EvolveOptions o;
  o.stride = 10;
  o.observer = [&](double, const SpectralField2D& s) {
    const RealField2D u = to_physical(s);
    dm = std::max(dm, std::abs(mass(u) / m0 - 1.0));
    dh = std::max(dh, std::abs(hamiltonian(u, c.params) / h0 - 1.0));
    dz = std::max(dz, zero_mode_max_deviation(s, z0));
  };
  evolve(u0, c, o);
  report(2, "conservation", dm < 1e-8 && dh < 1e-6,
         fmt("max rel mass drift %.3e (< 1e-8), max rel Hamiltonian drift %.3e (< 1e-6)", dm, dh));
  report(3, "zero-mode invariance", dz < 1e-12, fmt("max deviation %.3e (< 1e-12)", dz));
}

void integrator_order() {
  const GridSpec g = make_grid(128, 128, 32.0, 32.0);
  const RealField2D u0 = gaussian_data(g, 1.0);
  const std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};
  std::vector<SpectralField2D> r;
  for (double dt : dts) {
    SolverConfig c;
    c.dt = dt;
    c.T = 1.0;
    c.params = DispersionParams::checked(0.5);
    r.push_back(evolve(u0, c).final_state);
  }
  std::vector<double> h, e;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    h.push_back(dts[i]);
    e.push_back(diff_l2(r[i], r[i + 1]));
  }
  const FitResult f = fit_exponent(h, e, FitScale::loglog, 3);
  report(4, "integrator order", f.slope >= 3.7,
         fmt("ETDRK4 self-convergence order %.3f (>= 3.7), differences %.2e %.2e %.2e", f.slope, e[0], e[1], e[2]));
}

void expansion_identities() {
  ExpansionSpec spec = parse_expansion_spec("[jet]\nx0 = 0.5\n");
  const ExpansionReportSet set = expansion_report(spec);
  double worst = 0.0, corrected = 0.0;
  std::string flagged;
  for (const auto& r : set.reports) {
    worst = std::max(worst, r.max_rel_error);
    corrected = std::max(corrected, r.table_ok() ? r.max_rel_error : r.corrected_max_rel_error);
    for (const auto& t : r.flagged_terms)
      if (flagged.find(t) == std::string::npos) flagged += (flagged.empty() ? "" : ",") + t;
  }
  std::string detail = fmt("%.0f checks over %.0f points each, table error %.3e", static_cast<double>(set.reports.size()),
                           static_cast<double>(set.reports.front().points), worst);
  if (!flagged.empty()) detail += ", named terms {" + flagged + "}, error with those terms re-derived " + fmt("%.3e", corrected);
  report(5, "expansion identities", set.passed(), detail + " (< 1e-6)");
}

void stein_thresholds() {
  int total = 0, agree = 0, signed_total = 0, signed_agree = 0;
  std::string misses, signed_misses;
  for (double alpha : {0.5, 1.0, 1.5})
    for (double theta : {0.3, 0.6, 0.9, 1.2, 1.7}) {
      if (std::abs(theta - (alpha + 0.5)) < 0.1 - 1e-12) continue;
      const Membership rule = theta < alpha + 0.5 ? Membership::member : Membership::non_member;
      ++total;
      if (l2_membership_classify(power_profile(alpha), theta).verdict == rule) ++agree;
      else misses += fmt(" %.1f/%.1f", alpha, theta);
      ++signed_total;
      if (l2_membership_classify(signed_power_profile(alpha), theta).verdict == rule) ++signed_agree;
      else signed_misses += fmt(" %.1f/%.1f", alpha, theta);
    }
  const double gamma = 0.3, eps = 0.1;
  const Membership at = l2_membership_classify(gamma_profile(gamma), gamma).verdict;
  const Membership below = l2_membership_classify(gamma_profile(gamma), gamma - eps).verdict;
  const bool gamma_ok = at == Membership::non_member && below == Membership::member;
  std::string detail = fmt("|x|^alpha: %.0f/%.0f verdicts match", agree, total) +
                       (misses.empty() ? "" : " (misses" + misses + ")") + "; gamma family: theta = gamma " +
                       to_string(at) + ", theta = gamma - 0.1 " + to_string(below);
  report(6, "Stein thresholds", agree == total && gamma_ok, detail);
  std::printf("       info sgn(x)|x|^alpha against the same rule: %d/%d%s\n", signed_agree, signed_total,
              signed_misses.empty() ? "" : (" (misses" + signed_misses + ", x phi(x) is smooth)").c_str());
}

void asymptotic_exponents() {
  bool ok = true;
  std::string detail;
  for (auto [alpha, theta] : std::vector<std::pair<double, double>>{{1.5, 0.8}, {1.0, 0.3}, {1.0, 0.5}}) {
    const FitResult f = stein_slope(power_profile(alpha), theta, 10.0, 200.0);
    const bool good = std::abs(f.slope + 0.5 + theta) <= 0.05;
    ok = ok && good;
    detail += fmt("large a=%.1f t=%.1f %.3f (exp %.2f)", alpha, theta, f.slope, -0.5 - theta) + (good ? "; " : "[x]; ");
  }
  for (auto [alpha, theta] : std::vector<std::pair<double, double>>{{0.3, 0.9}, {0.5, 0.8}, {1.0, 0.4}, {0.8, 0.5}}) {
    const OffsetPowerFit f = stein_offset_fit(power_profile(alpha), theta, 1e-4, 1e-1);
    const bool good = std::abs(f.exponent - (alpha - theta)) <= 0.05;
    ok = ok && good;
    detail += fmt("small a=%.1f t=%.1f %.3f (exp %.2f)", alpha, theta, f.exponent, alpha - theta) + (good ? "; " : "[x]; ");
  }
  const FitResult lg = stein_log_fit(power_profile(0.5), 0.5, 1e-4, 1e-2);
  ok = ok && lg.r2 > 0.99;
  detail += fmt("log case R2 %.5f (> 0.99)", lg.r2);
  report(7, "asymptotic exponents", ok, detail);
  for (auto [alpha, theta] : std::vector<std::pair<double, double>>{{1.0, 0.4}, {0.8, 0.5}}) {
    std::printf("       info a=%.1f t=%.1f small-eta exponent by window:", alpha, theta);
    for (double hi : {1e-1, 1e-2, 1e-3, 1e-4})
      std::printf(" %.3f", stein_offset_fit(power_profile(alpha), theta, hi * 1e-3, hi).exponent);
    std::printf(" (min(alpha, 2(alpha - theta)) = %.2f)\n", std::min(alpha, 2.0 * (alpha - theta)));
  }
}

double brute_stein_squared(const std::function<double(double)>& f, double b, double x) {
  const double S = 30.0;
  const int M = 200000;
  const long double U = std::pow(static_cast<long double>(S), 0.25L), fx = f(x), h = U / M;
  auto g = [&](long double u) -> long double {
    if (u == 0.0L) return 0.0L;
    const long double s = u * u * u * u;
    const long double dp = f(static_cast<double>(x + s)) - fx, dm = f(static_cast<double>(x - s)) - fx;
    return 4.0L * (dp * dp + dm * dm) * std::pow(u, -1.0L - 8.0L * b);
  };
  long double acc = g(0.0L) + g(U);
  for (int i = 1; i < M; ++i) acc += (i % 2 ? 4.0L : 2.0L) * g(i * h);
  acc = acc * h / 3.0L + fx * fx * std::pow(static_cast<long double>(S), -2.0L * b) / b;
  return static_cast<double>(acc);
}

void stein_engine() {
  double scale_err = 0.0, brute_err = 0.0;
  for (double b : {0.25, 0.5, 0.75}) {
    for (double lam : {0.5, 2.0, 4.0})
      for (double x : {0.0, 0.37, 1.1}) {
        const double lhs = stein_derivative(gaussian_target(1.0, 0.0, 1.0 / lam), b, x).value;
        const double rhs = std::pow(lam, b) * stein_derivative(gaussian_target(1.0, 0.0, 1.0), b, lam * x).value;
        scale_err = std::max(scale_err, std::abs(lhs - rhs) / rhs);
      }
    for (double x : {0.0, 0.4, 1.3, 2.5}) {
      const double ref = brute_stein_squared([](double y) { return std::exp(-y * y); }, b, x);
      brute_err = std::max(brute_err, std::abs(stein_derivative(gaussian_target(1.0, 0.0, 1.0), b, x).squared - ref) / ref);
    }
  }
  report(8, "Stein engine", scale_err < 1e-4 && brute_err < 1e-4,
         fmt("scaling identity %.2e (< 1e-4), brute-force oracle %.2e (< 1e-4)", scale_err, brute_err));
}

std::string uc_config(double a, int nx, double lx, bool zero_mean) {
  return "[grid]\nnx = " + std::to_string(nx) + "\nny = 64\nlx = " + format_double(lx) +
         "\nly = 32\n[equation]\na = " + format_double(a) +
         "\n[solver]\ndt = 1e-3\nT = 0.5\n[initial]\nfamily = gaussian\namplitude = 0.5\nwidth_x = 1.5\nwidth_y = 1.5\n"
         "x_mean_removed = " + (zero_mean ? "true" : "false") + "\n[diagnostics]\nstride = 10\nN = 2, 4, 8, 16, inf\n";
}

void moment_identity() {
  auto run = [](double a, int nx, double lx) {
    return uc_compare(parse_run_config(uc_config(a, nx, lx, true)), parse_run_config(uc_config(a, nx, lx, false)), false);
  };
  const UcCompareResult r = run(0.5, 4096, 512.0);
  const double z = r.zero_mean.max_moment_residual, n = r.nonzero_mean.max_moment_residual;
  report(9, "moment identity", z < 1e-6 && n < 1e-6,
         fmt("a=0.5 box 512x32: zero-mean residual %.3e, nonzero-mean residual %.3e (< 1e-6)", z, n));
  const UcCompareResult r1 = run(1.0, 4096, 512.0);
  std::printf("       info a=1 box 512x32: zero-mean residual %.3e, nonzero-mean residual %.3e\n",
              r1.zero_mean.max_moment_residual, r1.nonzero_mean.max_moment_residual);
}

void probe_stability() {
  const std::vector<int> levels{16, 32, 64, 128};
  const auto ensemble = gaussian_ensemble(20, 12345);
  std::vector<double> x, ratio;
  for (int n : levels) {
    x.push_back(n);
    ratio.push_back(lemma_df_probe(0.5, 1.0, 0.5, ensemble, n).max_ratio);
  }
  const FitResult df = fit_exponent(x, ratio, FitScale::loglog, 4);
  const InterxResult ix = interx_probe(1.0, 0.5, 1.0, {2.0, 4.0, 8.0}, {64, 128, 256, 512}, 24.0);
  const double df_slope = df.slope;
  report(10, "probe stability", std::abs(df_slope) < 0.05 && std::abs(ix.slope_vs_refinement) < 0.05,
         fmt("DF ratio %.4f -> %.4f, log-log slope %.2e; interx slope %.2e (< 0.05)", ratio.front(), ratio.back(),
             df_slope, ix.slope_vs_refinement));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::function<void()>> checks{linear_exactness, conservation_and_zero_mode, integrator_order,
                                                  expansion_identities, stein_thresholds, asymptotic_exponents,
                                                  stein_engine, moment_identity, probe_stability};
  for (const auto& c : checks) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("[FAIL] check aborted: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d failing criteria, %.1f s\n", failures, seconds_since(t0));
  return failures;
}
