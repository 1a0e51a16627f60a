#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "gbzk/gbzk.h"

namespace {

int exit_code(gbzk_status s) {
  switch (s) {
    case GBZK_OK: return 0;
    case GBZK_ERR_BLOWUP: return 3;
    case GBZK_ERR_CONFIG:
    case GBZK_ERR_INVALID_ARGUMENT:
    case GBZK_ERR_FORMAT:
    case GBZK_ERR_IO: return 2;
    default: return 1;
  }
}

int finish(gbzk_status s, gbzk_report* r, bool print_summary = true) {
  if (r && print_summary) std::fputs(gbzk_report_summary(r), stdout);
  if (s != GBZK_OK) std::fprintf(stderr, "gbzk: %s\n", gbzk_last_error());
  gbzk_report_free(r);
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral lab for u_t + D_x^{a+1} u_x + u_xyy + u u_x = 0"};
  app.set_version_flag("--version", std::string(gbzk_version()));
  app.require_subcommand(1);

  std::string config, config_b, batch, spec, snapshot, weights, out_dir;

  auto* sim = app.add_subcommand("simulate", "Run one scenario and write CSV, manifest and snapshots");
  sim->add_option("config", config, "scenario file")->required();

  auto* uc = app.add_subcommand("uc-compare", "Compare a zero-mean and a nonzero-mean branch");
  uc->add_option("configA", config, "first scenario")->required();
  uc->add_option("configB", config_b, "second scenario")->required();

  auto* stein = app.add_subcommand("stein-profile", "Evaluate a batch of Stein-derivative queries");
  stein->add_option("batch", batch, "query batch")->required();
  stein->add_option("-o,--out", out_dir, "output directory")->default_val(".");

  auto* exp = app.add_subcommand("expansion-check", "Check the xi-derivative expansions against finite differences");
  exp->add_option("spec", spec, "check specification")->required();

  auto* norms = app.add_subcommand("norms", "Norms of a snapshot");
  norms->add_option("snapshot", snapshot, "snapshot file")->required();
  norms->add_option("weights", weights, "weight and Sobolev specifications")->required();
  norms->add_option("-o,--out", out_dir, "write norms.csv to this directory instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  gbzk_report* r = nullptr;
  gbzk_status s = GBZK_ERR_INVALID_ARGUMENT;
  if (*sim) s = gbzk_simulate(config.c_str(), &r);
  else if (*uc) s = gbzk_uc_compare(config.c_str(), config_b.c_str(), &r);
  else if (*stein) s = gbzk_stein_profile(batch.c_str(), out_dir.c_str(), &r);
  else if (*exp) s = gbzk_expansion_check(spec.c_str(), &r);
  else if (*norms) s = gbzk_norms(snapshot.c_str(), weights.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &r);
  return finish(s, r);
}
