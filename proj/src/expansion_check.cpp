#include "gbzk/expansion_check.hpp"

#include <algorithm>
#include <cmath>

#include "gbzk/error.hpp"

namespace gbzk {

namespace {

using lcplx = std::complex<long double>;

lcplx stencil(const std::function<lcplx(long double)>& f, long double x, int k, long double h) {
  const lcplx fm2 = f(x - 2 * h), fm1 = f(x - h), fp1 = f(x + h), fp2 = f(x + 2 * h);
  switch (k) {
    case 1: return (-fp2 + 8.0L * fp1 - 8.0L * fm1 + fm2) / (12.0L * h);
    case 2: return (-fp2 + 16.0L * fp1 - 30.0L * f(x) + 16.0L * fm1 - fm2) / (12.0L * h * h);
    case 3: return (fp2 - 2.0L * fp1 + 2.0L * fm1 - fm2) / (2.0L * h * h * h);
    case 4: return (fp2 - 4.0L * fp1 + 6.0L * f(x) - 4.0L * fm1 + fm2) / (h * h * h * h);
    default: throw InvalidArgument("central_difference: order must be in 1..4");
  }
}

}  // namespace

cplx central_difference(const std::function<lcplx(long double)>& f, double x, int k, double h) {
  // Leading truncation order of each stencil; the error expansion is even in h.
  const int p = k <= 2 ? 4 : 2;
  constexpr int levels = 4;
  lcplx table[levels];
  for (int n = 0; n < levels; ++n) table[n] = stencil(f, x, k, std::ldexp(static_cast<long double>(h), -n));
  for (int m = 1; m < levels; ++m) {
    const long double r = std::ldexp(1.0L, p + 2 * (m - 1));
    for (int n = levels - 1; n >= m; --n) table[n] = (r * table[n] - table[n - 1]) / (r - 1.0L);
  }
  return cplx(static_cast<double>(table[levels - 1].real()), static_cast<double>(table[levels - 1].imag()));
}

double expansion_fd_step(int k, double xi, double phase_rate) {
  static constexpr double base[5] = {0.0, 2e-2, 4e-2, 6e-2, 8e-2};
  if (k < 1 || k > 4) throw InvalidArgument("expansion_fd_step: order must be in 1..4");
  double h = base[k];
  h = std::min(h, std::abs(xi) / 8.0);
  if (phase_rate > 0.0) h = std::min(h, 0.5 / phase_rate);
  return h;
}

ExpansionCheckReport xi_expansion_check(int k, double t, const DispersionParams& params,
                                        const JetSource& source, const std::vector<double>& xi_set,
                                        const std::vector<double>& eta_set, double threshold) {
  if (k < 1 || k > 4) throw InvalidArgument("expansion check: order must be in 1..4");
  for (double xi : xi_set)
    if (std::abs(xi) < 0.1) throw InvalidArgument("expansion check: every |xi| must be >= 0.1");
  ExpansionCheckReport rep;
  rep.k = k;
  rep.t = t;
  rep.a = params.a;
  rep.threshold = threshold;
  const auto corrections = expansion_corrections(k);
  std::vector<bool> flagged(corrections.size(), false);
  std::vector<double> rel;
  for (double eta : eta_set) {
    auto F = [&](long double x) {
      const long double w = x * (static_cast<long double>(eta) * eta -
                                 std::pow(std::abs(x), 1.0L + static_cast<long double>(params.a)));
      return std::polar(1.0L, static_cast<long double>(t) * w) * source.extended(x, eta);
    };
    for (double xi : xi_set) {
      const PhiJet jet = source.jet(xi, eta);
      const ExpansionResult tab = xi_expansion_eval(k, jet, t, params, ExpansionTable::tabulated);
      const ExpansionResult corrected = xi_expansion_eval(k, jet, t, params, ExpansionTable::corrected);
      const cplx generic = xi_derivative_by_faa_di_bruno(k, jet, t, params);
      const double rate = std::abs(t * (eta * eta - (2.0 + params.a) *
                                                        std::pow(std::abs(xi), 1.0 + params.a)));
      const cplx fd = central_difference(F, xi, k, expansion_fd_step(k, xi, rate));
      double scale = 0.0;
      for (const auto& term : tab.terms) scale += std::abs(term.value);
      scale = std::max(scale, std::abs(fd));
      if (scale == 0.0) scale = 1.0;
      const double e = std::abs(tab.value - fd) / scale;
      rel.push_back(e);
      rep.max_abs_error = std::max(rep.max_abs_error, std::abs(tab.value - fd));
      rep.corrected_max_rel_error =
          std::max(rep.corrected_max_rel_error, std::abs(corrected.value - fd) / scale);
      rep.faa_di_bruno_max_rel_error =
          std::max(rep.faa_di_bruno_max_rel_error, std::abs(generic - fd) / scale);
      for (std::size_t c = 0; c < corrections.size(); ++c)
        for (std::size_t n = 0; n < tab.terms.size(); ++n)
          if (tab.terms[n].label == corrections[c] &&
              std::abs(tab.terms[n].value - corrected.terms[n].value) / scale > threshold)
            flagged[c] = true;
    }
  }
  rep.points = rel.size();
  if (!rel.empty()) {
    rep.max_rel_error = *std::max_element(rel.begin(), rel.end());
    std::nth_element(rel.begin(), rel.begin() + rel.size() / 2, rel.end());
    rep.median_rel_error = rel[rel.size() / 2];
  }
  for (std::size_t c = 0; c < corrections.size(); ++c)
    if (flagged[c]) rep.flagged_terms.push_back(corrections[c]);
  return rep;
}

}  // namespace gbzk
