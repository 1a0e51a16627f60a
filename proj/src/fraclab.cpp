#include "gbzk/fraclab.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "gbzk/error.hpp"

namespace gbzk {

double cutoff_phi(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  const double p = std::exp(-1.0 / (2.0 - ax));
  const double q = std::exp(-1.0 / (ax - 1.0));
  return p / (p + q);
}

namespace {

constexpr double kPi = std::numbers::pi;

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(12);
  return rule;
}

// Weights c_j with f^(k)(x) ~ sum_j c_j f(x + (j + offset) h) / h^k, j = 0..8.
std::array<double, 9> stencil_weights(int k, int offset) {
  // sum_j c_j (j + offset)^m = k! delta_{mk}, m = 0..8
  long double A[9][10];
  long double kf = 1.0L;
  for (int i = 2; i <= k; ++i) kf *= i;
  for (int m = 0; m < 9; ++m) {
    for (int j = 0; j < 9; ++j) A[m][j] = std::pow(static_cast<long double>(j + offset), m);
    A[m][9] = (m == k) ? kf : 0.0L;
  }
  for (int c = 0; c < 9; ++c) {
    int piv = c;
    for (int r = c + 1; r < 9; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    for (int j = 0; j < 10; ++j) std::swap(A[c][j], A[piv][j]);
    for (int r = 0; r < 9; ++r) {
      if (r == c) continue;
      const long double f = A[r][c] / A[c][c];
      for (int j = c; j < 10; ++j) A[r][j] -= f * A[c][j];
    }
  }
  std::array<double, 9> w{};
  for (int j = 0; j < 9; ++j) w[j] = static_cast<double>(A[j][9] / A[j][j]);
  return w;
}

using StencilSet = std::array<std::array<double, 9>, 5>;

const StencilSet& central_stencils() {
  static const StencilSet s = [] {
    StencilSet out{};
    for (int k = 1; k <= 4; ++k) out[k] = stencil_weights(k, -4);
    return out;
  }();
  return s;
}

const StencilSet& forward_stencils() {
  static const StencilSet s = [] {
    StencilSet out{};
    for (int k = 1; k <= 4; ++k) out[k] = stencil_weights(k, 0);
    return out;
  }();
  return s;
}

struct Tag {
  double p = 0.0;
  int side = 0;  // +1: x + s reaches p at this endpoint, -1: x - s does, 0: none
};

struct Cut {
  double s;
  Tag tag;
};

class SteinIntegrator {
 public:
  SteinIntegrator(const SteinTarget& t, double b, double x, const SteinOptions& o)
      : t_(t), b_(b), x_(x), o_(o), second_(b >= 1.0), power_(1.0 + 2.0 * b) {}

  double fx = 0.0;
  cplx fxv{};

  double integrand(double s, cplx fp, cplx fm) const {
    const double w = std::pow(s, -power_);
    if (second_) return std::norm(fp + fm - 2.0 * fxv) * w;
    return (std::norm(fp - fxv) + std::norm(fm - fxv)) * w;
  }

  // Integral over [lo, hi]; tags describe which breakpoint sits at each end.
  double panel(double lo, double hi, Tag ta, Tag tb, double& err) const {
    if (!(hi > lo)) return 0.0;
    if (oscillatory_) {
      double total = 0.0;
      double s = lo;
      Tag left = ta;
      const double budget = 6.0 * kPi;
      int guard = 0;
      while (s < hi) {
        double h = std::min(hi - s, t_.scale);
        while (h * std::max(slope_at(s), slope_at(s + h)) > budget) h *= 0.5;
        double next = s + h;
        if (next >= hi - 1e-12 * (hi - lo) || ++guard > 100000000) next = hi;
        const Tag right = next == hi ? tb : Tag{};
        if (left.side != 0 || right.side != 0 || s == lo) {
          total += tanh_sinh_piece(s, next, left, right, err);
        } else {
          total += boost::math::quadrature::gauss<double, 20>::integrate(
              [&](double u) { return integrand(u, t_.f(x_ + u), t_.f(x_ - u)); }, s, next);
        }
        left = Tag{};
        s = next;
      }
      return total;
    }
    return tanh_sinh_piece(lo, hi, ta, tb, err);
  }

  double tanh_sinh_piece(double lo, double hi, Tag ta, Tag tb, double& err) const {
    auto g = [&](double s, double xc) {
      double yp = x_ + s, ym = x_ - s;
      const Tag& tg = xc < 0.0 ? ta : tb;
      if (tg.side > 0) yp = tg.p - xc;
      if (tg.side < 0) ym = tg.p + xc;
      const double v = integrand(s, t_.f(yp), t_.f(ym));
      return std::isfinite(v) ? v : 0.0;
    };
    double e = 0.0, l1 = 0.0;
    const double v = tanh_sinh_rule().integrate(g, lo, hi, 1e-12, &e, &l1);
    err += e;
    return v;
  }

  // Exact integral on [0, delta] of the model f(x +- s) = f(x) + sum_k c_k^{+-} s^k, k = 1..4.
  // One-sided coefficients are used when x sits on a breakpoint.
  double inner(double delta, bool one_sided, double& err) const {
    const double h = delta / 4.0;
    cplx p[5]{}, q[5]{};
    double fact = 1.0;
    for (int k = 1; k <= 4; ++k) {
      fact *= k;
      const double scale = std::pow(h, k) * fact;
      if (one_sided) {
        cplx dp{}, dq{};
        for (int j = 0; j < 9; ++j) {
          dp += forward_stencils()[k][j] * t_.f(x_ + j * h);
          dq += forward_stencils()[k][j] * t_.f(x_ - j * h);
        }
        p[k] = dp / scale;
        q[k] = dq / scale;
      } else {
        cplx d{};
        for (int j = 0; j < 9; ++j) d += central_stencils()[k][j] * t_.f(x_ + (j - 4) * h);
        p[k] = d / scale;
        q[k] = (k % 2 ? -1.0 : 1.0) * p[k];
      }
    }
    auto mono = [&](int m) { return std::pow(delta, m - 2.0 * b_) / (m - 2.0 * b_); };
    double v = 0.0, high = 0.0;
    for (int j = 1; j <= 4; ++j) {
      for (int k = 1; k <= 4; ++k) {
        if (second_ && j + k < 4) continue;
        const double c = second_ ? std::real((p[j] + q[j]) * std::conj(p[k] + q[k]))
                                 : std::real(p[j] * std::conj(p[k]) + q[j] * std::conj(q[k]));
        const double term = c * mono(j + k);
        v += term;
        if (j + k >= 6) high += std::abs(term);
      }
    }
    err += high + 1e-14 * std::abs(v);
    return std::max(v, 0.0);
  }

  double slope_at(double s) const {
    return std::max(t_.phase_slope(x_ + s), t_.phase_slope(x_ - s));
  }

  double tail_coef() const { return second_ ? 4.0 : 2.0; }

  SteinValue run() {
    SteinValue out;
    const double ax = std::abs(x_);
    fxv = t_.f(x_);
    const bool finite_radius = std::isfinite(t_.radius);
    bool outside = finite_radius && ax > t_.radius;
    if (outside) fxv = cplx{};
    if (!std::isfinite(fxv.real()) || !std::isfinite(fxv.imag()))
      throw InvalidArgument("stein_derivative: target is singular at the evaluation point");
    // With f(x) = 0 only |f(x +- s)|^2 enters, which does not oscillate.
    oscillatory_ = static_cast<bool>(t_.phase_slope) && (fxv != cplx{} || (second_ && !outside));

    double dist = std::numeric_limits<double>::infinity();
    bool on_break = false;
    for (double p : t_.breakpoints) {
      if (p == x_) on_break = true;
      else dist = std::min(dist, std::abs(x_ - p));
    }
    double local = std::min(t_.scale, dist);
    if (t_.phase_slope) {
      const double w = t_.phase_slope(x_);
      if (w > 0.0) local = std::min(local, 1.0 / w);
    }
    // On a breakpoint with f(x) = 0 there is no cancellation and f need not be smooth.
    const bool use_inner = !outside && !(on_break && fxv == cplx{});
    const double delta = o_.inner_fraction * local;

    double lo = outside ? ax - t_.radius : 0.0;
    double hi;
    if (finite_radius && !t_.unimodular) {
      hi = ax + t_.radius;
    } else {
      hi = 2.0 * ax + 10.0 * t_.scale;
    }

    std::vector<Cut> cuts;
    cuts.push_back({lo, Tag{}});
    if (use_inner) cuts.push_back({delta, Tag{}});
    for (double p : t_.breakpoints) {
      if (p < x_) cuts.push_back({x_ - p, Tag{p, -1}});
      if (p > x_) cuts.push_back({p - x_, Tag{p, +1}});
    }
    std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.s < b.s; });

    double err = 0.0;
    double total = 0.0;
    if (use_inner && lo == 0.0) total += inner(delta, on_break, err);
    const double start = use_inner && lo == 0.0 ? delta : lo;

    auto integrate_to = [&](double from, Tag tfrom, double to) {
      double acc = 0.0;
      double s = from;
      Tag ts = tfrom;
      for (const Cut& c : cuts) {
        if (c.s <= s) {
          if (c.s == s && c.tag.side != 0) ts = c.tag;
          continue;
        }
        if (c.s >= to) break;
        acc += panel(s, c.s, ts, c.tag, err);
        s = c.s;
        ts = c.tag;
      }
      Tag tend{};
      for (const Cut& c : cuts)
        if (c.s == to && c.tag.side != 0) tend = c.tag;
      acc += panel(s, to, ts, tend, err);
      return acc;
    };

    Tag tstart{};
    for (const Cut& c : cuts)
      if (c.s == start && c.tag.side != 0) tstart = c.tag;

    const double f2 = std::norm(fxv);
    if (finite_radius && !t_.unimodular) {
      total += integrate_to(start, tstart, hi);
      total += tail_coef() * f2 * std::pow(hi, -2.0 * b_) / (2.0 * b_);
      out.converged = true;
    } else if (t_.unimodular) {
      if (second_) throw InvalidArgument("stein_derivative: unimodular targets need 0 < b < 1");
      total += integrate_to(start, tstart, hi);
      for (int ext = 0;; ++ext) {
        const double tail = 4.0 * std::pow(hi, -2.0 * b_) / (2.0 * b_);
        double bound = 0.0;
        if (t_.phase_slope) {
          const double wp = std::max(t_.phase_slope(x_ + hi), 1e-300);
          const double wm = std::max(t_.phase_slope(x_ - hi), 1e-300);
          bound = 4.0 * std::pow(hi, -power_) * (1.0 / wp + 1.0 / wm);
        } else {
          bound = tail;
        }
        if (bound <= o_.rel_tol * (total + tail)) {
          total += tail;
          err += bound;
          out.converged = true;
          break;
        }
        if (ext >= o_.max_extensions) {
          total += tail;
          err += bound;
          out.converged = false;
          break;
        }
        total += panel(hi, 2.0 * hi, Tag{}, Tag{}, err);
        hi *= 2.0;
      }
    } else {
      total += integrate_to(start, tstart, hi);
      double prev = total + tail_coef() * f2 * std::pow(hi, -2.0 * b_) / (2.0 * b_);
      out.converged = false;
      for (int ext = 0; ext < o_.max_extensions; ++ext) {
        total += panel(hi, 2.0 * hi, Tag{}, Tag{}, err);
        hi *= 2.0;
        const double cur = total + tail_coef() * f2 * std::pow(hi, -2.0 * b_) / (2.0 * b_);
        if (std::abs(cur - prev) <= o_.rel_tol * std::abs(cur)) {
          out.converged = true;
          prev = cur;
          break;
        }
        prev = cur;
      }
      total = prev;
    }
    out.squared = std::max(total, 0.0);
    out.value = std::sqrt(out.squared);
    out.error = err;
    return out;
  }

 private:
  const SteinTarget& t_;
  double b_, x_;
  SteinOptions o_;
  bool second_;
  double power_;
  bool oscillatory_ = false;
};

std::vector<std::pair<double, double>> legendre_rule(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  std::vector<double> z = boost::math::legendre_p_zeros<double>(n);
  std::vector<std::pair<double, double>> out;
  for (double r : z) {
    const double d = boost::math::legendre_p_prime(n, r);
    const double w = 2.0 / ((1.0 - r * r) * d * d);
    out.push_back({r, w});
    if (r != 0.0) out.push_back({-r, w});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return v;
}

}  // namespace

SteinValue stein_derivative(const SteinTarget& target, double b, double x, const SteinOptions& opts) {
  if (!(b > 0.0 && b < 2.0)) throw InvalidArgument("stein_derivative: b must lie in (0, 2)");
  if (!target.f) throw InvalidArgument("stein_derivative: empty target");
  SteinIntegrator it(target, b, x, opts);
  return it.run();
}

double stein_l2_norm_squared(const SteinTarget& target, double b, int n, const SteinOptions& opts) {
  if (!std::isfinite(target.radius)) throw InvalidArgument("stein_l2_norm_squared: target needs a finite radius");
  const double X = 1.5 * target.radius;
  // The core is split at the breakpoints, where D^b f is typically not smooth.
  std::vector<double> edges{-X, X};
  for (double p : target.breakpoints)
    if (p > -X && p < X) edges.push_back(p);
  std::sort(edges.begin(), edges.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const int m = std::max(4, static_cast<int>(std::lround(n * (hi - lo) / (2.0 * X))));
    for (const auto& [r, w] : legendre_rule(m)) {
      const double x = 0.5 * (hi - lo) * r + 0.5 * (hi + lo);
      acc += 0.5 * (hi - lo) * w * stein_derivative(target, b, x, opts).squared;
    }
  }
  const int m = std::max(2, n / 2);
  // x = X v^{-1/(2b)} maps the |x|^{-1-2b} tail onto a bounded integrand in v.
  for (const auto& [r, w] : legendre_rule(m)) {
    const double v = 0.5 * (r + 1.0);
    const double x = X * std::pow(v, -1.0 / (2.0 * b));
    const double jac = 0.5 * w * X / (2.0 * b) * std::pow(v, -1.0 - 1.0 / (2.0 * b));
    acc += jac * (stein_derivative(target, b, x, opts).squared + stein_derivative(target, b, -x, opts).squared);
  }
  return acc;
}

double stein_spectral_constant(double b) {
  if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("stein_spectral_constant: b must lie in (0, 1)");
  return std::sqrt(2.0 * kPi / (std::tgamma(1.0 + 2.0 * b) * std::sin(kPi * b)));
}

SteinTarget power_profile(double alpha) {
  SteinTarget t;
  t.f = [alpha](double x) { return cplx(x == 0.0 ? (alpha > 0.0 ? 0.0 : (alpha == 0.0 ? 1.0 : INFINITY)) : std::pow(std::abs(x), alpha) * cutoff_phi(x), 0.0); };
  t.breakpoints = {-2.0, -1.0, 0.0, 1.0, 2.0};
  t.radius = 2.0;
  t.label = "|x|^" + std::to_string(alpha) + " phi";
  return t;
}

SteinTarget signed_power_profile(double alpha) {
  SteinTarget t = power_profile(alpha);
  t.f = [alpha](double x) {
    if (x == 0.0) return cplx{};
    const double v = std::pow(std::abs(x), alpha) * cutoff_phi(x);
    return cplx(x < 0.0 ? -v : v, 0.0);
  };
  t.label = "sgn(x)|x|^" + std::to_string(alpha) + " phi";
  return t;
}

SteinTarget gamma_profile(double gamma) {
  SteinTarget t = power_profile(gamma - 0.5);
  t.label = "|x|^(" + std::to_string(gamma) + "-1/2) phi";
  return t;
}

SteinTarget gaussian_target(double amplitude, double center, double width) {
  if (!(width > 0.0)) throw InvalidArgument("gaussian_target: width must be positive");
  SteinTarget t;
  t.f = [=](double x) {
    const double d = (x - center) / width;
    return cplx(amplitude * std::exp(-d * d), 0.0);
  };
  t.radius = std::abs(center) + 6.5 * width;
  t.scale = width;
  t.label = "gaussian";
  return t;
}

SteinTarget plane_wave(double k) {
  SteinTarget t;
  t.f = [k](double x) { return std::polar(1.0, k * x); };
  t.unimodular = true;
  const double ak = std::abs(k);
  t.phase_slope = [ak](double) { return ak; };
  t.scale = ak > 0.0 ? 1.0 / ak : 1.0;
  t.label = "exp(ikx)";
  return t;
}

SteinTarget dispersive_phase(double time, double a) {
  SteinTarget t;
  t.f = [=](double x) { return std::polar(1.0, -time * x * std::pow(std::abs(x), 1.0 + a)); };
  t.unimodular = true;
  t.phase_slope = [=](double x) { return time * (2.0 + a) * std::pow(std::abs(x), 1.0 + a); };
  t.breakpoints = {0.0};
  t.scale = std::pow(time, -1.0 / (2.0 + a));
  t.label = "exp(-itx|x|^(1+a))";
  return t;
}

SteinTarget query_target(const SteinQuery& q) {
  switch (q.kind) {
    case ProfileKind::power: return power_profile(q.exponent);
    case ProfileKind::signed_power: return signed_power_profile(q.exponent);
    case ProfileKind::gamma: return gamma_profile(q.exponent);
    case ProfileKind::user: return q.user;
  }
  throw InvalidArgument("unknown profile kind");
}

std::vector<SteinValue> dstein_profile(const SteinQuery& q, const SteinOptions& opts) {
  const SteinTarget t = query_target(q);
  std::vector<SteinValue> out;
  out.reserve(q.points.size());
  for (double x : q.points) out.push_back(stein_derivative(t, q.b, x, opts));
  return out;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::non_member: return "non-member";
    case Membership::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Integral of D^2 over [lo, hi] (lo > 0) with Gauss-Legendre in log|eta|.
double log_window_integral(const SteinTarget& profile, double theta, double lo, double hi, int nodes) {
  const double ul = std::log(lo), uh = std::log(hi);
  double acc = 0.0;
  for (const auto& [r, w] : legendre_rule(nodes)) {
    const double u = 0.5 * (uh - ul) * r + 0.5 * (uh + ul);
    const double eta = std::exp(u);
    acc += 0.5 * (uh - ul) * w * eta * stein_derivative(profile, theta, eta).squared;
  }
  return acc;
}

}  // namespace

MembershipEvidence l2_membership_classify(const SteinTarget& profile, double theta, const MembershipOptions& opts) {
  if (opts.last_decade - opts.first_decade < 2) throw InvalidArgument("membership: need at least three decades");
  MembershipEvidence ev;
  // D is even for even and odd profiles alike, so both half-lines contribute equally.
  double far = 0.0;
  for (int k = opts.first_decade - 1; k >= -3; --k)
    far += 2.0 * log_window_integral(profile, theta, std::pow(10.0, -k - 1), std::pow(10.0, -k), opts.nodes);
  const double top = 1e3;
  far += 2.0 * stein_derivative(profile, theta, top).squared * top / (2.0 * theta);
  ev.far_part = far;

  std::vector<double> scale;
  double partial = far;
  for (int k = opts.first_decade; k <= opts.last_decade; ++k) {
    const double inc =
        2.0 * log_window_integral(profile, theta, std::pow(10.0, -k - 1), std::pow(10.0, -k), opts.nodes);
    ev.eps.push_back(std::pow(10.0, -k));
    ev.increments.push_back(inc);
    partial += inc;
    ev.partial.push_back(partial);
    scale.push_back(std::pow(10.0, k));
  }
  // The first decades carry the transition from the cutoff; the verdict uses the deepest ones.
  const std::size_t tail = std::min<std::size_t>(4, scale.size());
  const std::vector<double> sx(scale.end() - tail, scale.end());
  const std::vector<double> sy(ev.increments.end() - tail, ev.increments.end());
  const FitResult fit = fit_exponent(sx, sy, FitScale::loglog, 3);
  ev.exponent = fit.slope;
  ev.exponent_ci = fit.slope_ci;
  if (ev.exponent > opts.slope_band) {
    ev.verdict = Membership::non_member;
    ev.reason = "per-decade increments grow like 10^(" + std::to_string(ev.exponent) + " k)";
  } else if (ev.exponent < -opts.slope_band) {
    const double r = std::pow(10.0, ev.exponent);
    const double rest = ev.increments.back() * r / (1.0 - r);
    ev.verdict = Membership::member;
    ev.reason = "increments decay geometrically (ratio " + std::to_string(r) + "), remaining mass " +
                std::to_string(rest / ev.partial.back());
  } else {
    const auto [mn, mx] = std::minmax_element(sy.begin(), sy.end());
    const std::vector<double> depth(sx.begin(), sx.end());
    const std::vector<double> part(ev.partial.end() - tail, ev.partial.end());
    const FitResult lin = fit_exponent(depth, part, FitScale::semilog, 3);
    if (*mx / *mn < 1.05 && lin.r2 > 0.999 && lin.slope > 0.0) {
      ev.verdict = Membership::non_member;
      ev.reason = "constant increments: norm grows linearly in log(1/eps) (R^2 = " + std::to_string(lin.r2) + ")";
    } else {
      ev.verdict = Membership::inconclusive;
      ev.reason = "increment exponent within the inconclusive band";
    }
  }
  return ev;
}

FitResult stein_slope(const SteinTarget& profile, double theta, double lo, double hi, int n) {
  std::vector<double> x = log_grid(lo, hi, n), y;
  for (double e : x) y.push_back(stein_derivative(profile, theta, e).value);
  return fit_exponent(x, y, FitScale::loglog);
}

FitResult stein_log_fit(const SteinTarget& profile, double theta, double lo, double hi, int n) {
  std::vector<double> x = log_grid(lo, hi, n), y;
  for (double e : x) y.push_back(stein_derivative(profile, theta, e).squared);
  return fit_exponent(x, y, FitScale::semilog);
}

OffsetPowerFit stein_offset_fit(const SteinTarget& profile, double theta, double lo, double hi, int n) {
  std::vector<double> x = log_grid(lo, hi, n), y;
  for (double e : x) y.push_back(stein_derivative(profile, theta, e).value);
  auto solve = [&](double p, double& c, double& c1) {
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double g = std::pow(x[i], p);
      s11 += g * g;
      s12 += g;
      s22 += 1.0;
      b1 += g * y[i];
      b2 += y[i];
    }
    const double det = s11 * s22 - s12 * s12;
    c = (b1 * s22 - b2 * s12) / det;
    c1 = (s11 * b2 - s12 * b1) / det;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - c * std::pow(x[i], p) - c1;
      sse += e * e;
    }
    return sse;
  };
  const auto best = boost::math::tools::brent_find_minima(
      [&](double p) {
        double c, c1;
        return solve(p, c, c1);
      },
      -2.5, 2.5, 50);
  OffsetPowerFit out;
  out.exponent = best.first;
  solve(best.first, out.c, out.c1);
  std::vector<double> r;
  for (double v : y) r.push_back(std::max(std::abs(v - out.c1), 1e-300));
  out.residual_fit = fit_exponent(x, r, FitScale::loglog);
  return out;
}

PhaseProbeResult phase_lemma_probe(PhaseLemma kind, double b, double a, const std::vector<double>& t_grid,
                                   const std::vector<double>& space_grid, double t_fixed, double s_fixed) {
  if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("phase_lemma_probe: b must lie in (0, 1)");
  for (double t : t_grid)
    if (!(t > 0.0)) throw InvalidArgument("phase_lemma_probe: t values must be positive");
  PhaseProbeResult res;
  std::vector<double> ys, yt;
  if (kind == PhaseLemma::P) {
    for (double eta : space_grid) ys.push_back(stein_derivative(plane_wave(t_fixed * eta * eta), b, 0.0).value);
    for (double t : t_grid) yt.push_back(stein_derivative(plane_wave(t * s_fixed * s_fixed), b, 0.0).value);
    res.space_bound = 2.0 * b;
    res.time_bound = b;
  } else {
    const SteinTarget ft = dispersive_phase(t_fixed, a);
    for (double x : space_grid) ys.push_back(stein_derivative(ft, b, x).value);
    std::vector<double> yo;
    for (double t : t_grid) {
      const SteinTarget g = dispersive_phase(t, a);
      yt.push_back(stein_derivative(g, b, s_fixed).value);
      yo.push_back(stein_derivative(g, b, 0.0).value);
    }
    res.origin = fit_exponent(t_grid, yo);
    res.origin_expected = b / (2.0 + a);
    res.space_bound = (1.0 + a) * b;
    res.time_bound = b;
  }
  res.space = fit_exponent(space_grid, ys);
  res.time = fit_exponent(t_grid, yt);
  res.within_bounds = res.space.slope <= res.space_bound + 0.05 && res.time.slope <= res.time_bound + 0.05;
  if (kind == PhaseLemma::pontual1) res.within_bounds = res.within_bounds && res.origin.slope <= res.origin_expected + 0.05;
  return res;
}

std::vector<GaussianMember> gaussian_ensemble(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<GaussianMember> out;
  for (int i = 0; i < size; ++i) {
    GaussianMember m;
    m.amplitude = uni(0.5, 1.5);
    m.x0 = uni(-1.5, 1.5);
    m.y0 = uni(-1.5, 1.5);
    m.sx = uni(0.8, 1.6);
    m.sy = uni(0.8, 1.6);
    out.push_back(m);
  }
  return out;
}

DfProbeResult lemma_df_probe(double theta, double t, double a, const std::vector<GaussianMember>& ensemble,
                             int resolution) {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("lemma_df_probe: theta must lie in (0, 1)");
  if (t < 0.0) throw InvalidArgument("lemma_df_probe: t must be nonnegative");
  DfProbeResult res;
  res.rho = 1.0 + std::pow(t, theta) + std::pow(t, theta / (2.0 + theta));
  const auto eta_rule = legendre_rule(resolution);
  for (const GaussianMember& m : ensemble) {
    if (m.amplitude == 0.0) {
      res.ratios.push_back(0.0);
      continue;
    }
    const double H = 6.5 / m.sy;
    double lhs2 = 0.0;
    for (const auto& [r, w] : eta_rule) {
      const double eta = H * r;
      const double env = m.amplitude * 2.0 * kPi * m.sx * m.sy * std::exp(-0.5 * m.sy * m.sy * eta * eta);
      SteinTarget row;
      row.f = [=](double xi) {
        const double ph = t * xi * (eta * eta - std::pow(std::abs(xi), 1.0 + a)) - m.x0 * xi - m.y0 * eta;
        return std::polar(env * std::exp(-0.5 * m.sx * m.sx * xi * xi), ph);
      };
      row.phase_slope = [=](double xi) {
        return std::abs(t * eta * eta - t * (2.0 + a) * std::pow(std::abs(xi), 1.0 + a) - m.x0);
      };
      row.breakpoints = {0.0};
      row.radius = 6.5 / m.sx;
      row.scale = 1.0 / m.sx;
      lhs2 += w * H * stein_l2_norm_squared(row, theta, resolution);
    }
    const double A2 = m.amplitude * m.amplitude;
    const double sp = std::sqrt(kPi);
    const double n0 = std::sqrt(A2 * kPi * m.sx * m.sy);
    const double ny = std::sqrt(A2 * m.sx * m.sx * m.sy * m.sy * (sp / m.sx) * std::tgamma(2.0 * theta + 0.5) *
                                std::pow(m.sy, -4.0 * theta - 1.0));
    const double px = (1.0 + a) * theta;
    const double nx = std::sqrt(A2 * m.sx * m.sx * m.sy * m.sy * (sp / m.sy) * std::tgamma(px + 0.5) *
                                std::pow(m.sx, -2.0 * px - 1.0));
    auto wx = [&](double x) {
      const double d = (x - m.x0) / m.sx;
      return std::pow(std::abs(x), 2.0 * theta) * std::exp(-d * d);
    };
    const double L = std::abs(m.x0) + 12.0 * m.sx;
    double e = 0.0;
    double ix = 0.0;
    if (-L < 0.0) ix += tanh_sinh_rule().integrate(wx, -L, 0.0, 1e-12, &e);
    ix += tanh_sinh_rule().integrate(wx, 0.0, L, 1e-12, &e);
    const double nm = std::sqrt(A2 * ix * sp * m.sy);
    const double rhs = res.rho * (n0 + ny + nx) + nm;
    res.ratios.push_back(std::sqrt(lhs2) / rhs);
  }
  for (double r : res.ratios) res.max_ratio = std::max(res.max_ratio, r);
  return res;
}

}  // namespace gbzk
