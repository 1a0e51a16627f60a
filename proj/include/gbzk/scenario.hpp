#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gbzk/config.hpp"
#include "gbzk/diagnostics.hpp"
#include "gbzk/solver.hpp"

namespace gbzk {

inline constexpr const char* kCodeVersion = "gbzk 0.3.0";

enum class InitialFamily { gaussian, single_mode, file };

struct InitialSpec {
  InitialFamily family = InitialFamily::gaussian;
  double amplitude = 1.0;
  double width_x = 1.0;
  double width_y = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  // Gaussian family only: replace the x-profile by (1 - 2 x^2 / w^2) exp(-x^2 / w^2),
  // whose x-integral vanishes, and clear the xi = 0 column.
  bool x_mean_removed = false;
  int mode_kx = 1;
  int mode_ky = 0;
  std::string path;
};

struct DiagnosticsSpec {
  long stride = 1;
  long snapshot_stride = 0;
  double r1 = 1.0;
  double r2 = 1.0;
  std::vector<double> N_ladder{std::numeric_limits<double>::infinity()};
  SobolevSpec sobolev{1.0, 1.0};
  double energy_s = 1.0;  // E^s = H^{(1+a)s, 2s} for the reported supremum
  double moment_eta = 0.0;
};

struct RunConfig {
  GridSpec grid;
  SolverConfig solver;
  InitialSpec initial;
  DiagnosticsSpec diagnostics;
  std::string output_dir = ".";
  std::string origin;
};

/// Sections [grid], [equation], [solver], [initial], [diagnostics], [output].
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_run_config(const std::string& path);

/// Every setting, one `key = value` per line, in a fixed order.
std::string canonical_config(const RunConfig& cfg);
std::string manifest_hash(const RunConfig& cfg);

RealField2D initial_field(const RunConfig& cfg);

struct DiagnosticRow {
  double t = 0.0;
  double mass = 0.0;
  double hamiltonian = 0.0;
  double sob_x = 0.0;
  double sob_y = 0.0;
  std::vector<double> wnorm_x;  // one per N in the ladder
  double wnorm_y = 0.0;
  double zero_mode_maxdev = 0.0;
  cplx xmom;
};

/// Diagnostics of one state against the initial zero-mode slice.
DiagnosticRow diagnose(double t, const SpectralField2D& state, const RealField2D& u, const RunConfig& cfg,
                       const std::vector<cplx>& zero_mode_ref);

std::string csv_header(const RunConfig& cfg);
std::string csv_row(const DiagnosticRow& row);

struct BlowUpInfo {
  bool occurred = false;
  double time = 0.0;
  double last_good_time = 0.0;
  int kx = 0;
  int ky = 0;
  std::string message;
};

struct ScenarioResult {
  std::string hash;
  std::vector<DiagnosticRow> rows;
  double sup_energy_norm = 0.0;
  double max_boundary_ratio = 0.0;
  BlowUpInfo blowup;
  std::vector<std::string> snapshots;
  std::string csv;
  std::string manifest;
};

/// Runs the configured evolution. With write_files the CSV, manifest and snapshots go
/// to the output directory; a blow-up is recorded in the result and manifest, not thrown.
ScenarioResult run_scenario(const RunConfig& cfg, bool write_files = true);

struct UcBranch {
  std::string label;
  std::string hash;
  std::vector<double> t;
  // wnorm[r][N][time]
  std::vector<std::vector<std::vector<double>>> wnorm;
  std::vector<double> zero_mode_maxdev;
  std::vector<cplx> xmom;
  std::vector<double> half_mass;  // (1/2) integral u^2
  std::vector<double> moment_residual;  // centred d/dt Re xmom - half_mass, interior times
  double max_moment_residual = 0.0;     // relative to max half_mass
  double max_zero_mode_dev = 0.0;
  double max_boundary_ratio = 0.0;
  bool ladder_monotone = true;
  BlowUpInfo blowup;
};

struct UcCompareResult {
  std::vector<double> r1_values;
  std::vector<double> N_ladder;
  UcBranch zero_mean;
  UcBranch nonzero_mean;
  std::string csv;
  std::string report;
};

/// r1 in {2, 5/2 + a, 7/2 + a}. The configs must agree except for the x-mean flag
/// (and the output directory); results are written to the first config's directory.
UcCompareResult uc_compare(const RunConfig& a, const RunConfig& b, bool write_files = true);

/// Worker count from GBZK_WORKERS (default 1).
int worker_count();

/// Calls fn(i) for i in [0, n) on worker_count() threads; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gbzk
