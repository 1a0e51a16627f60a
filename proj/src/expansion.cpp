#include "gbzk/expansion.hpp"

#include <cmath>
#include <span>

#include "gbzk/error.hpp"

namespace gbzk {

namespace {

constexpr cplx I{0.0, 1.0};

// coef(a) * t^t_pow * eta^eta_pow * [sgn(xi)] * |xi|^(xi0 + xi1 a) * d^jet phi^ / dxi^jet
struct Monomial {
  const char* label;
  int jet;
  cplx (*coef)(double a);
  int t_pow;
  int eta_pow;
  bool sgn;
  double xi0;
  double xi1;
};

// c = 2 + a and d = 1 + a throughout.
#define C_ (2.0 + a)
#define D_ (1.0 + a)

const Monomial kFirst[] = {
    {"E1", 0, [](double) { return I; }, 1, 2, false, 0, 0},
    {"E2", 0, [](double a) { return -I * C_; }, 1, 0, false, 1, 1},
    {"E3", 1, [](double) { return cplx(1.0); }, 0, 0, false, 0, 0},
};

const Monomial kSecond[] = {
    {"F1", 0, [](double a) { return -I * C_ * D_; }, 1, 0, true, 0, 1},
    {"F2", 0, [](double a) { return cplx(-C_ * C_); }, 2, 0, false, 2, 2},
    {"F3", 0, [](double a) { return cplx(2.0 * C_); }, 2, 2, false, 1, 1},
    {"F4", 0, [](double) { return cplx(-1.0); }, 2, 4, false, 0, 0},
    {"F5", 1, [](double) { return 2.0 * I; }, 1, 2, false, 0, 0},
    {"F6", 1, [](double a) { return -2.0 * I * C_; }, 1, 0, false, 1, 1},
    {"F7", 2, [](double) { return cplx(1.0); }, 0, 0, false, 0, 0},
};

const Monomial kThird[] = {
    {"G1", 0, [](double a) { return cplx(3.0 * C_ * D_); }, 2, 2, true, 0, 1},
    {"G2", 0, [](double a) { return -3.0 * I * C_ * C_; }, 3, 2, false, 2, 2},
    {"G3", 0, [](double a) { return I * C_ * C_ * C_; }, 3, 0, false, 3, 3},
    {"G4", 0, [](double a) { return 3.0 * I * C_; }, 3, 4, false, 1, 1},
    {"G5", 0, [](double) { return -I; }, 3, 6, false, 0, 0},
    {"G6", 0, [](double a) { return -I * a * C_ * D_; }, 1, 0, false, -1, 1},
    {"G7", 0, [](double a) { return cplx(-3.0 * C_ * C_ * D_); }, 2, 0, true, 1, 2},
    {"G8", 1, [](double a) { return -3.0 * I * C_ * D_; }, 1, 0, true, 0, 1},
    {"G9", 1, [](double a) { return cplx(-3.0 * C_ * C_); }, 2, 0, false, 2, 2},
    {"G10", 1, [](double a) { return cplx(6.0 * C_); }, 2, 2, false, 1, 1},
    {"G11", 1, [](double) { return cplx(-3.0); }, 2, 4, false, 0, 0},
    {"G12", 2, [](double) { return 3.0 * I; }, 1, 2, false, 0, 0},
    {"G13", 2, [](double a) { return -3.0 * I * C_; }, 1, 0, false, 1, 1},
    {"G14", 3, [](double) { return cplx(1.0); }, 0, 0, false, 0, 0},
};

const Monomial kFourthTabulated[] = {
    {"H1", 0, [](double a) { return cplx(4.0 * a * C_ * D_); }, 2, 2, false, -1, 1},
    {"H2", 0, [](double a) { return cplx(-(7.0 * a + 3.0) * D_ * C_ * C_); }, 2, 0, false, 0, 2},
    {"H3", 0, [](double a) { return -9.0 * I * D_ * C_ * C_; }, 3, 2, true, 1, 2},
    {"H4", 0, [](double a) { return -6.0 * I * C_ * C_ * C_ * D_; }, 3, 0, true, 2, 3},
    {"H5", 0, [](double a) { return 6.0 * I * C_ * D_; }, 3, 4, true, 0, 1},
    {"H6", 0, [](double a) { return -I * a * C_ * (a * a - 1.0); }, 1, 0, true, -2, 1},
    {"H7", 0, [](double a) { return cplx(6.0 * C_ * C_); }, 4, 4, false, 2, 2},
    {"H8", 0, [](double a) { return cplx(-4.0 * C_ * C_ * C_); }, 4, 2, false, 3, 3},
    {"H9", 0, [](double a) { return cplx(C_ * C_ * C_ * C_); }, 4, 0, false, 4, 4},
    {"H10", 0, [](double a) { return cplx(-4.0 * C_); }, 4, 6, false, 1, 1},
    {"H11", 0, [](double) { return cplx(1.0); }, 4, 8, false, 0, 0},
    {"H12", 1, [](double a) { return -4.0 * I * a * C_ * D_; }, 1, 0, false, -1, 1},
    {"H13", 1, [](double a) { return cplx(-12.0 * C_ * C_ * D_); }, 2, 0, true, 1, 2},
    {"H14", 1, [](double a) { return cplx(12.0 * D_ * C_); }, 2, 2, true, 0, 1},
    {"H15", 1, [](double a) { return 12.0 * I * C_; }, 3, 4, false, 1, 1},
    {"H16", 1, [](double a) { return -12.0 * I * C_ * C_; }, 3, 2, false, 2, 2},
    {"H17", 1, [](double a) { return 4.0 * I * C_ * C_ * C_; }, 3, 0, false, 3, 3},
    {"H18", 1, [](double) { return -4.0 * I; }, 3, 6, false, 0, 0},
    {"H19", 2, [](double a) { return -6.0 * I * C_ * D_; }, 1, 0, true, 0, 1},
    {"H20", 2, [](double) { return cplx(-6.0); }, 2, 4, false, 0, 0},
    {"H21", 2, [](double a) { return cplx(-6.0 * C_ * C_); }, 2, 0, false, 2, 2},
    {"H22", 2, [](double a) { return cplx(12.0 * C_); }, 2, 2, false, 1, 1},
    {"H23", 3, [](double) { return 4.0 * I; }, 1, 2, false, 0, 0},
    {"H24", 3, [](double a) { return -4.0 * I * C_; }, 1, 0, false, 1, 1},
    {"H25", 4, [](double) { return cplx(1.0); }, 0, 0, false, 0, 0},
};

// The tabulated H3 and H4 coefficients do not match the fourth derivative of the
// phase; these are the values obtained from -6 i g'^2 g''.
const Monomial kFourthCorrected[] = {
    {"H3", 0, [](double a) { return -12.0 * I * D_ * C_ * C_; }, 3, 2, true, 1, 2},
    {"H4", 0, [](double a) { return 6.0 * I * C_ * C_ * C_ * D_; }, 3, 0, true, 2, 3},
};

#undef C_
#undef D_

std::span<const Monomial> table_for(int k) {
  switch (k) {
    case 1: return kFirst;
    case 2: return kSecond;
    case 3: return kThird;
    case 4: return kFourthTabulated;
    default: throw InvalidArgument("xi expansion order must be in 1..4");
  }
}

double ipow(double v, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= v;
  return r;
}

cplx evaluate(const Monomial& m, const PhiJet& jet, double t, double a, cplx psi) {
  const double ax = std::abs(jet.xi);
  double mag = ipow(t, m.t_pow) * ipow(jet.eta, m.eta_pow);
  const double p = m.xi0 + m.xi1 * a;
  if (p != 0.0) mag *= std::pow(ax, p);
  if (m.sgn) mag *= jet.xi > 0.0 ? 1.0 : (jet.xi < 0.0 ? -1.0 : 0.0);
  return psi * m.coef(a) * mag * jet.v[m.jet];
}

}  // namespace

ExpansionResult xi_expansion_eval(int k, const PhiJet& jet, double t, const DispersionParams& params,
                                  ExpansionTable table) {
  const auto terms = table_for(k);
  if (k >= 2 && jet.xi == 0.0)
    throw InvalidArgument("xi expansion of order >= 2 is singular at xi = 0");
  const double a = params.a;
  const cplx psi = std::polar(1.0, t * dispersion_symbol(jet.xi, jet.eta, a));
  ExpansionResult r{};
  r.terms.reserve(terms.size());
  for (const Monomial& m : terms) {
    const Monomial* use = &m;
    if (table == ExpansionTable::corrected && k == 4)
      for (const Monomial& c : kFourthCorrected)
        if (std::string_view(c.label) == m.label) use = &c;
    // Terms carrying t^0 * |xi|^(negative) only appear with a t factor, so t = 0 is safe.
    const cplx v = (use->t_pow > 0 && t == 0.0) ? cplx{} : evaluate(*use, jet, t, a, psi);
    r.terms.push_back({m.label, v});
    r.value += v;
  }
  return r;
}

std::vector<std::string> expansion_corrections(int k) {
  table_for(k);
  std::vector<std::string> out;
  if (k == 4)
    for (const Monomial& c : kFourthCorrected) out.emplace_back(c.label);
  return out;
}

cplx xi_derivative_by_faa_di_bruno(int k, const PhiJet& jet, double t, const DispersionParams& params) {
  if (k < 1 || k > 4) throw InvalidArgument("xi expansion order must be in 1..4");
  const double xi = jet.xi, eta = jet.eta, a = params.a;
  if (k >= 2 && xi == 0.0) throw InvalidArgument("xi expansion of order >= 2 is singular at xi = 0");
  const double c = 2.0 + a, d = 1.0 + a;
  const double ax = std::abs(xi);
  const double s = xi > 0.0 ? 1.0 : (xi < 0.0 ? -1.0 : 0.0);
  // Derivatives of the real phase g(xi) = t xi (eta^2 - |xi|^{1+a}).
  const double g1 = t * (eta * eta - c * std::pow(ax, d));
  const double g2 = k >= 2 ? -t * c * d * s * std::pow(ax, a) : 0.0;
  const double g3 = k >= 3 ? -t * c * d * a * std::pow(ax, a - 1.0) : 0.0;
  const double g4 = k >= 4 ? -t * c * d * a * (a - 1.0) * s * std::pow(ax, a - 2.0) : 0.0;
  const cplx x1 = I * g1, x2 = I * g2, x3 = I * g3, x4 = I * g4;
  // Complete Bell polynomials: psi^(m) = psi * B_m(x1, ..., xm).
  const cplx B[5] = {
      1.0,
      x1,
      x1 * x1 + x2,
      x1 * x1 * x1 + 3.0 * x1 * x2 + x3,
      x1 * x1 * x1 * x1 + 6.0 * x1 * x1 * x2 + 4.0 * x1 * x3 + 3.0 * x2 * x2 + x4,
  };
  static constexpr double binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  cplx sum{};
  for (int j = 0; j <= k; ++j) sum += binom[k][j] * B[k - j] * jet.v[j];
  return std::polar(1.0, t * dispersion_symbol(xi, eta, a)) * sum;
}

}  // namespace gbzk
