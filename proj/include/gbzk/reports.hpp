#pragma once

#include <string>
#include <vector>

#include "gbzk/config.hpp"
#include "gbzk/diagnostics.hpp"
#include "gbzk/expansion_check.hpp"
#include "gbzk/fraclab.hpp"
#include "gbzk/snapshot.hpp"

namespace gbzk {

enum class ExpectedVerdict { none, automatic, member, non_member };

struct SteinBatchQuery {
  std::string name;
  std::string family;  // power, signed_power, gamma, gaussian, plane_wave, dispersive_phase
  SteinQuery query;
  bool classify = false;
  ExpectedVerdict expected = ExpectedVerdict::none;
  std::vector<double> slope_window;  // empty, or {lo, hi}
  std::vector<double> params;        // family parameters in canonical order
};

struct SteinBatch {
  MembershipOptions membership;
  std::vector<SteinBatchQuery> queries;
  std::string canonical;
};

/// Optional [membership] section, then one [query.<name>] section per query.
SteinBatch parse_stein_batch(const std::string& text, const std::string& origin = "<string>");
SteinBatch load_stein_batch(const std::string& path);

/// Verdict implied by the threshold rules of the three singular families.
Membership threshold_verdict(const std::string& family, double exponent, double theta);

struct SteinVerdictRow {
  std::string name;
  std::string family;
  double exponent = 0.0;
  double theta = 0.0;
  MembershipEvidence evidence;
  bool has_expected = false;
  Membership expected = Membership::inconclusive;
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  bool has_slope = false;
  FitResult slope;
};

struct SteinReport {
  std::string hash;
  std::vector<SteinVerdictRow> verdicts;
  std::string values_csv;
  std::string verdicts_csv;
  bool all_expected_match() const;
};

SteinReport stein_report(const SteinBatch& batch);

struct ExpansionSpec {
  double a = 0.5;
  std::vector<int> orders{1, 2, 3, 4};
  std::vector<double> times{0.0, 0.2, 1.0};
  std::vector<double> xi;
  std::vector<double> eta;
  double threshold = 1e-6;
  double amplitude = 1.0, xi0 = 0.0, s_xi = 1.0, s_eta = 1.0, x0 = 0.0;
  std::string output_dir;
  std::string canonical;
};

/// Ten xi values with |xi| >= 0.1 and ten eta values.
std::vector<double> default_expansion_xi();
std::vector<double> default_expansion_eta();

/// Sections [check] (a, orders, t, xi, eta, threshold), [jet] (amplitude, xi0, s_xi, s_eta, x0), [output].
ExpansionSpec parse_expansion_spec(const std::string& text, const std::string& origin = "<string>");

struct ExpansionReportSet {
  std::string hash;
  std::vector<ExpansionCheckReport> reports;
  std::string csv;
  std::string text;
  bool passed() const;
};

ExpansionReportSet expansion_report(const ExpansionSpec& spec);

struct NormRequest {
  std::string name;
  std::string kind;  // weight or sobolev
  WeightSpec weight;
  SobolevSpec sobolev;
};

/// Sections [weight.<name>] (r1, r2, N) and [sobolev.<name>] (s1, s2, or s for E^s).
std::vector<NormRequest> parse_norm_requests(const std::string& text, double a,
                                             const std::string& origin = "<string>");

/// CSV of mass, Hamiltonian, L2 and each requested norm of the snapshot.
std::string norms_report(const Snapshot& snap, const std::vector<NormRequest>& requests, const std::string& hash);

}  // namespace gbzk
