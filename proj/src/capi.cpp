#include "gbzk/gbzk.h"

#include <filesystem>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "gbzk/error.hpp"
#include "gbzk/reports.hpp"
#include "gbzk/scenario.hpp"
#include "gbzk/snapshot.hpp"

struct gbzk_report {
  std::string summary;
  std::vector<std::pair<std::string, std::string>> artifacts;
  std::map<std::string, double> values;
};

struct gbzk_snapshot {
  gbzk::Snapshot snap;
};

namespace {

thread_local std::string last_error;

template <class F>
gbzk_status guarded(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const gbzk::ConfigError& e) {
    last_error = e.what();
    return GBZK_ERR_CONFIG;
  } catch (const gbzk::BlowUpError& e) {
    last_error = e.what();
    return GBZK_ERR_BLOWUP;
  } catch (const gbzk::InvalidArgument& e) {
    last_error = e.what();
    return GBZK_ERR_INVALID_ARGUMENT;
  } catch (const gbzk::SizeMismatch& e) {
    last_error = e.what();
    return GBZK_ERR_INVALID_ARGUMENT;
  } catch (const gbzk::FormatError& e) {
    last_error = e.what();
    return GBZK_ERR_FORMAT;
  } catch (const gbzk::IoError& e) {
    last_error = e.what();
    return GBZK_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GBZK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GBZK_ERR_INTERNAL;
  }
}

gbzk_status invalid(const char* what) {
  last_error = what;
  return GBZK_ERR_INVALID_ARGUMENT;
}

void write_artifacts(const gbzk_report& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw gbzk::ConfigError("output directory '" + dir + "' cannot be created");
  for (const auto& [name, text] : r.artifacts) gbzk::write_text_file((std::filesystem::path(dir) / name).string(), text);
}

std::string describe_blowup(const gbzk::BlowUpInfo& b) {
  return "blow-up at t = " + gbzk::format_double(b.time) + " (last good t = " + gbzk::format_double(b.last_good_time) +
         "): " + b.message + "\n";
}

}  // namespace

extern "C" {

const char* gbzk_version(void) { return gbzk::kCodeVersion; }

const char* gbzk_last_error(void) { return last_error.c_str(); }

int gbzk_worker_count(void) { return gbzk::worker_count(); }

gbzk_status gbzk_simulate(const char* config_path, gbzk_report** out) {
  if (!config_path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const gbzk::RunConfig cfg = gbzk::load_run_config(config_path);
    const gbzk::ScenarioResult res = gbzk::run_scenario(cfg, true);
    auto r = std::make_unique<gbzk_report>();
    r->artifacts = {{"diagnostics.csv", res.csv}, {"manifest.txt", res.manifest}};
    r->values["rows"] = static_cast<double>(res.rows.size());
    r->values["sup_energy_norm"] = res.sup_energy_norm;
    r->values["max_boundary_ratio"] = res.max_boundary_ratio;
    r->values["blowup"] = res.blowup.occurred ? 1.0 : 0.0;
    r->values["snapshots"] = static_cast<double>(res.snapshots.size());
    r->summary = "manifest " + res.hash + "\n" + std::to_string(res.rows.size()) + " diagnostic rows written to " +
                 cfg.output_dir + "\n";
    if (res.blowup.occurred) {
      r->values["blowup_time"] = res.blowup.time;
      r->summary += describe_blowup(res.blowup);
      last_error = res.blowup.message;
    }
    *out = r.release();
    return res.blowup.occurred ? GBZK_ERR_BLOWUP : GBZK_OK;
  });
}

gbzk_status gbzk_uc_compare(const char* config_a, const char* config_b, gbzk_report** out) {
  if (!config_a || !config_b || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const gbzk::RunConfig a = gbzk::load_run_config(config_a);
    const gbzk::RunConfig b = gbzk::load_run_config(config_b);
    const gbzk::UcCompareResult res = gbzk::uc_compare(a, b, true);
    auto r = std::make_unique<gbzk_report>();
    r->artifacts = {{"uc_compare.csv", res.csv}, {"uc_report.txt", res.report}};
    r->summary = res.report;
    r->values["zero_mean_max_moment_residual"] = res.zero_mean.max_moment_residual;
    r->values["nonzero_mean_max_moment_residual"] = res.nonzero_mean.max_moment_residual;
    r->values["zero_mean_max_zero_mode_dev"] = res.zero_mean.max_zero_mode_dev;
    r->values["nonzero_mean_max_zero_mode_dev"] = res.nonzero_mean.max_zero_mode_dev;
    r->values["ladder_monotone"] = res.zero_mean.ladder_monotone && res.nonzero_mean.ladder_monotone ? 1.0 : 0.0;
    const bool blow = res.zero_mean.blowup.occurred || res.nonzero_mean.blowup.occurred;
    r->values["blowup"] = blow ? 1.0 : 0.0;
    *out = r.release();
    if (blow) last_error = "blow-up in one of the branches";
    return blow ? GBZK_ERR_BLOWUP : GBZK_OK;
  });
}

gbzk_status gbzk_stein_profile(const char* batch_path, const char* out_dir, gbzk_report** out) {
  if (!batch_path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const gbzk::SteinBatch batch = gbzk::load_stein_batch(batch_path);
    const gbzk::SteinReport rep = gbzk::stein_report(batch);
    auto r = std::make_unique<gbzk_report>();
    r->artifacts = {{"stein_values.csv", rep.values_csv}, {"stein_verdicts.csv", rep.verdicts_csv}};
    r->summary = "manifest " + rep.hash + "\n";
    for (const auto& v : rep.verdicts) {
      r->summary += v.name + ": " + v.family + " exponent " + gbzk::format_double(v.exponent) + " theta " +
                    gbzk::format_double(v.theta) + " -> " + gbzk::to_string(v.evidence.verdict);
      if (v.has_expected) r->summary += std::string(" (expected ") + gbzk::to_string(v.expected) + ")";
      r->summary += "\n";
    }
    r->values["queries"] = static_cast<double>(batch.queries.size());
    r->values["verdicts"] = static_cast<double>(rep.verdicts.size());
    r->values["all_expected_match"] = rep.all_expected_match() ? 1.0 : 0.0;
    if (out_dir) write_artifacts(*r, out_dir);
    *out = r.release();
    return GBZK_OK;
  });
}

gbzk_status gbzk_expansion_check(const char* spec_path, gbzk_report** out) {
  if (!spec_path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    gbzk::read_ini_file(spec_path);
    gbzk::ExpansionSpec spec;
    try {
      spec = gbzk::parse_expansion_spec(gbzk::read_text_file(spec_path), spec_path);
    } catch (const gbzk::ConfigError& e) {
      throw gbzk::ConfigError(std::string(spec_path) + ": " + e.what());
    }
    const gbzk::ExpansionReportSet rep = gbzk::expansion_report(spec);
    auto r = std::make_unique<gbzk_report>();
    r->artifacts = {{"expansion_check.csv", rep.csv}, {"expansion_check.txt", rep.text}};
    r->summary = rep.text;
    double worst = 0.0;
    for (const auto& c : rep.reports) worst = std::max(worst, c.max_rel_error);
    r->values["passed"] = rep.passed() ? 1.0 : 0.0;
    r->values["max_rel_error"] = worst;
    if (!spec.output_dir.empty()) write_artifacts(*r, spec.output_dir);
    *out = r.release();
    return GBZK_OK;
  });
}

gbzk_status gbzk_norms(const char* snapshot_path, const char* weights_path, const char* out_dir, gbzk_report** out) {
  if (!snapshot_path || !weights_path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string bytes = gbzk::read_text_file(snapshot_path);
    const gbzk::Snapshot snap = gbzk::decode_snapshot(bytes);
    gbzk::read_ini_file(weights_path);
    const std::string weights = gbzk::read_text_file(weights_path);
    std::vector<gbzk::NormRequest> req;
    try {
      req = gbzk::parse_norm_requests(weights, snap.a, weights_path);
    } catch (const gbzk::ConfigError& e) {
      throw gbzk::ConfigError(std::string(weights_path) + ": " + e.what());
    }
    const std::string hash = gbzk::fnv1a_hex(std::string(gbzk::kCodeVersion) + "\nnorms\n" + bytes + weights);
    auto r = std::make_unique<gbzk_report>();
    r->artifacts = {{"norms.csv", gbzk::norms_report(snap, req, hash)}};
    r->summary = r->artifacts.front().second;
    r->values["requests"] = static_cast<double>(req.size());
    if (out_dir) write_artifacts(*r, out_dir);
    *out = r.release();
    return GBZK_OK;
  });
}

void gbzk_report_free(gbzk_report* r) { delete r; }

const char* gbzk_report_summary(const gbzk_report* r) { return r ? r->summary.c_str() : ""; }

size_t gbzk_report_artifact_count(const gbzk_report* r) { return r ? r->artifacts.size() : 0; }

const char* gbzk_report_artifact_name(const gbzk_report* r, size_t i) {
  return r && i < r->artifacts.size() ? r->artifacts[i].first.c_str() : nullptr;
}

const char* gbzk_report_artifact_text(const gbzk_report* r, size_t i, size_t* length) {
  if (!r || i >= r->artifacts.size()) return nullptr;
  if (length) *length = r->artifacts[i].second.size();
  return r->artifacts[i].second.c_str();
}

int gbzk_report_has(const gbzk_report* r, const char* key) { return r && key && r->values.count(key) ? 1 : 0; }

double gbzk_report_value(const gbzk_report* r, const char* key) {
  if (!r || !key) return 0.0;
  const auto it = r->values.find(key);
  return it == r->values.end() ? 0.0 : it->second;
}

gbzk_status gbzk_snapshot_read(const char* path, gbzk_snapshot** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new gbzk_snapshot{gbzk::read_snapshot(path)};
    return GBZK_OK;
  });
}

void gbzk_snapshot_free(gbzk_snapshot* s) { delete s; }

gbzk_status gbzk_snapshot_info(const gbzk_snapshot* s, size_t* nx, size_t* ny, double* lx, double* ly, double* a,
                               double* t) {
  if (!s) return invalid("null snapshot");
  last_error.clear();
  const auto& g = s->snap.field.grid;
  if (nx) *nx = static_cast<size_t>(g.nx());
  if (ny) *ny = static_cast<size_t>(g.ny());
  if (lx) *lx = g.lx();
  if (ly) *ly = g.ly();
  if (a) *a = s->snap.a;
  if (t) *t = s->snap.t;
  return GBZK_OK;
}

const double* gbzk_snapshot_data(const gbzk_snapshot* s) { return s ? s->snap.field.samples.data() : nullptr; }

}  // extern "C"
