#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gbzk/jet.hpp"

namespace gbzk {

/// k-th derivative (k in 1..4) of a smooth complex function by 5-point central
/// stencils in extended precision, Richardson-extrapolated over h, h/2, h/4, h/8.
cplx central_difference(const std::function<std::complex<long double>(long double)>& f, double x, int k,
                        double h);

/// Step used for order k at xi: a per-order base step, shrunk near xi = 0 and
/// where the phase oscillates quickly.
double expansion_fd_step(int k, double xi, double phase_rate);

struct ExpansionCheckReport {
  int k = 0;
  double t = 0.0;
  double a = 0.0;
  std::size_t points = 0;
  double threshold = 1e-6;
  double max_rel_error = 0.0;     // term table vs finite differences
  double median_rel_error = 0.0;
  double max_abs_error = 0.0;
  double corrected_max_rel_error = 0.0;
  double faa_di_bruno_max_rel_error = 0.0;
  // Terms whose tabulated coefficient departs from the re-derived one by more than
  // the threshold at some sample point (empty when the table matches).
  std::vector<std::string> flagged_terms;

  bool table_ok() const { return max_rel_error < threshold; }
  /// Term table agrees with the oracle, or the disagreement is fully explained
  /// by the flagged terms (the corrected table agrees).
  bool passed() const {
    return table_ok() || (!flagged_terms.empty() && corrected_max_rel_error < threshold);
  }
};

/// Compares the term tables against finite differences of psi * phi^ over the
/// product set xi_set x eta_set. Relative errors are measured against the sum of
/// term magnitudes. Requires |xi| >= 0.1 for every xi in xi_set.
ExpansionCheckReport xi_expansion_check(int k, double t, const DispersionParams& params,
                                        const JetSource& source, const std::vector<double>& xi_set,
                                        const std::vector<double>& eta_set, double threshold = 1e-6);

}  // namespace gbzk
