#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "gbzk/propagator.hpp"

namespace gbzk {

/// phi^ and its first four xi-derivatives at one (xi, eta).
struct PhiJet {
  double xi = 0.0;
  double eta = 0.0;
  std::array<cplx, 5> v{};
};

/// One indexed term of a tabulated xi-derivative expansion of psi * phi^.
struct ExpansionTerm {
  std::string label;  // "F3", "G12", "H25", ...
  cplx value;         // includes the psi factor
};

struct ExpansionResult {
  cplx value;
  std::vector<ExpansionTerm> terms;
};

enum class ExpansionTable {
  tabulated,  // term-indexed coefficient table
  corrected   // re-derived; differs from tabulated only where listed by expansion_corrections()
};

/// Analytic d^k/dxi^k (psi phi^) at (jet.xi, jet.eta, t) assembled term by term,
/// k in 1..4. Throws InvalidArgument for k outside 1..4, or xi = 0 with k >= 2.
ExpansionResult xi_expansion_eval(int k, const PhiJet& jet, double t, const DispersionParams& params,
                                  ExpansionTable table = ExpansionTable::tabulated);

/// Labels of terms whose corrected coefficient differs from the tabulated one.
std::vector<std::string> expansion_corrections(int k);

/// Same derivative via Leibniz and Faa di Bruno on the phase g = t xi (eta^2 - |xi|^{1+a});
/// an algebraic route independent of the term tables.
cplx xi_derivative_by_faa_di_bruno(int k, const PhiJet& jet, double t, const DispersionParams& params);

}  // namespace gbzk
