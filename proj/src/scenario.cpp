#include "gbzk/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "gbzk/error.hpp"
#include "gbzk/snapshot.hpp"
#include "gbzk/spectral.hpp"

namespace gbzk {

namespace fs = std::filesystem;

namespace {

const char* family_name(InitialFamily f) {
  switch (f) {
    case InitialFamily::gaussian: return "gaussian";
    case InitialFamily::single_mode: return "single_mode";
    case InitialFamily::file: return "file";
  }
  return "?";
}

const char* integrator_name(Integrator i) { return i == Integrator::etdrk4 ? "etdrk4" : "strang"; }

std::string ladder_label(double N) { return std::isinf(N) ? "inf" : format_double(N); }

void make_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output directory '" + dir + "' cannot be created");
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  const IniDocument doc = parse_ini(text, origin);
  check_sections(doc, {"grid", "equation", "solver", "initial", "diagnostics", "output"});
  RunConfig cfg;
  cfg.origin = origin;

  SectionReader grid(doc, "grid");
  const long nx = grid.integer("nx", 128), ny = grid.integer("ny", 128);
  const double lx = grid.number("lx", 2.0 * M_PI), ly = grid.number("ly", 2.0 * M_PI);
  try {
    cfg.grid = make_grid(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("[grid] ") + e.what(), grid.line_of("nx"));
  }
  grid.finish();

  SectionReader eq(doc, "equation");
  const double a = eq.number("a", 0.5);
  try {
    cfg.solver.params = DispersionParams::checked(a);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("[equation] ") + e.what(), eq.line_of("a"));
  }
  eq.finish();

  SectionReader sol(doc, "solver");
  cfg.solver.dt = sol.number("dt", 1e-3);
  cfg.solver.T = sol.number("T", 1.0);
  cfg.solver.dealias = sol.flag("dealias", true);
  cfg.solver.nonlinear = sol.flag("nonlinear", true);
  const std::string integ = sol.text("integrator", "etdrk4");
  if (integ == "etdrk4") cfg.solver.integrator = Integrator::etdrk4;
  else if (integ == "strang") cfg.solver.integrator = Integrator::strang;
  else throw ConfigError("[solver] integrator must be etdrk4 or strang", sol.line_of("integrator"));
  try {
    cfg.solver.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("[solver] ") + e.what(), sol.line_of("dt"));
  }
  sol.finish();

  SectionReader ini(doc, "initial");
  const std::string fam = ini.text("family", "gaussian");
  if (fam == "gaussian") cfg.initial.family = InitialFamily::gaussian;
  else if (fam == "single_mode") cfg.initial.family = InitialFamily::single_mode;
  else if (fam == "file") cfg.initial.family = InitialFamily::file;
  else throw ConfigError("[initial] unknown family '" + fam + "'", ini.line_of("family"));
  auto& in = cfg.initial;
  in.amplitude = ini.number("amplitude", 1.0);
  in.width_x = ini.number("width_x", 1.0);
  in.width_y = ini.number("width_y", 1.0);
  in.center_x = ini.number("center_x", 0.0);
  in.center_y = ini.number("center_y", 0.0);
  in.x_mean_removed = ini.flag("x_mean_removed", false);
  in.mode_kx = static_cast<int>(ini.integer("mode_kx", 1));
  in.mode_ky = static_cast<int>(ini.integer("mode_ky", 0));
  in.path = ini.text("path", "");
  if (!(in.width_x > 0.0) || !(in.width_y > 0.0))
    throw ConfigError("[initial] widths must be positive", ini.line_of("width_x"));
  if (!std::isfinite(in.amplitude)) throw ConfigError("[initial] amplitude must be finite", ini.line_of("amplitude"));
  if (in.family == InitialFamily::file && in.path.empty())
    throw ConfigError("[initial] family = file needs a path", ini.line_of("family"));
  if (in.x_mean_removed && in.family != InitialFamily::gaussian)
    throw ConfigError("[initial] x_mean_removed applies to the gaussian family only", ini.line_of("x_mean_removed"));
  ini.finish();

  SectionReader dia(doc, "diagnostics");
  auto& d = cfg.diagnostics;
  d.stride = dia.integer("stride", 1);
  d.snapshot_stride = dia.integer("snapshot_stride", 0);
  d.r1 = dia.number("r1", 1.0);
  d.r2 = dia.number("r2", 1.0);
  d.N_ladder = dia.numbers("N", d.N_ladder);
  d.energy_s = dia.number("s", 1.0);
  d.sobolev = SobolevSpec::energy(d.energy_s, a);
  d.sobolev.s1 = dia.number("s1", d.sobolev.s1);
  d.sobolev.s2 = dia.number("s2", d.sobolev.s2);
  d.moment_eta = dia.number("moment_eta", 0.0);
  if (d.stride < 1) throw ConfigError("[diagnostics] stride must be >= 1", dia.line_of("stride"));
  if (d.snapshot_stride < 0) throw ConfigError("[diagnostics] snapshot_stride must be >= 0", dia.line_of("snapshot_stride"));
  if (d.r1 < 0.0 || d.r2 < 0.0) throw ConfigError("[diagnostics] r1, r2 must be nonnegative", dia.line_of("r1"));
  if (d.N_ladder.empty()) throw ConfigError("[diagnostics] N ladder is empty", dia.line_of("N"));
  for (double N : d.N_ladder)
    if (!(N >= 1.0 / std::sqrt(3.0))) throw ConfigError("[diagnostics] every N must be >= 1/sqrt(3)", dia.line_of("N"));
  dia.finish();

  SectionReader out(doc, "output");
  cfg.output_dir = out.text("dir", ".");
  out.finish();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  const IniDocument probe = read_ini_file(path);  // reports unreadable files as config errors
  (void)probe;
  try {
    return parse_run_config(read_text_file(path), path);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

std::string canonical_body(const RunConfig& c) {
  std::ostringstream o;
  o << "grid.nx = " << c.grid.nx() << "\n"
    << "grid.ny = " << c.grid.ny() << "\n"
    << "grid.lx = " << format_double(c.grid.lx()) << "\n"
    << "grid.ly = " << format_double(c.grid.ly()) << "\n"
    << "equation.a = " << format_double(c.solver.params.a) << "\n"
    << "solver.dt = " << format_double(c.solver.dt) << "\n"
    << "solver.T = " << format_double(c.solver.T) << "\n"
    << "solver.steps = " << c.solver.steps() << "\n"
    << "solver.integrator = " << integrator_name(c.solver.integrator) << "\n"
    << "solver.dealias = " << (c.solver.dealias ? "true" : "false") << "\n"
    << "solver.nonlinear = " << (c.solver.nonlinear ? "true" : "false") << "\n"
    << "initial.family = " << family_name(c.initial.family) << "\n"
    << "initial.amplitude = " << format_double(c.initial.amplitude) << "\n"
    << "initial.width_x = " << format_double(c.initial.width_x) << "\n"
    << "initial.width_y = " << format_double(c.initial.width_y) << "\n"
    << "initial.center_x = " << format_double(c.initial.center_x) << "\n"
    << "initial.center_y = " << format_double(c.initial.center_y) << "\n"
    << "initial.x_mean_removed = " << (c.initial.x_mean_removed ? "true" : "false") << "\n"
    << "initial.mode_kx = " << c.initial.mode_kx << "\n"
    << "initial.mode_ky = " << c.initial.mode_ky << "\n"
    << "initial.path = " << c.initial.path << "\n"
    << "diagnostics.stride = " << c.diagnostics.stride << "\n"
    << "diagnostics.snapshot_stride = " << c.diagnostics.snapshot_stride << "\n"
    << "diagnostics.r1 = " << format_double(c.diagnostics.r1) << "\n"
    << "diagnostics.r2 = " << format_double(c.diagnostics.r2) << "\n"
    << "diagnostics.N = ";
  for (std::size_t i = 0; i < c.diagnostics.N_ladder.size(); ++i)
    o << (i ? ", " : "") << ladder_label(c.diagnostics.N_ladder[i]);
  o << "\n"
    << "diagnostics.s = " << format_double(c.diagnostics.energy_s) << "\n"
    << "diagnostics.s1 = " << format_double(c.diagnostics.sobolev.s1) << "\n"
    << "diagnostics.s2 = " << format_double(c.diagnostics.sobolev.s2) << "\n"
    << "diagnostics.moment_eta = " << format_double(c.diagnostics.moment_eta) << "\n";
  return o.str();
}

}  // namespace

std::string canonical_config(const RunConfig& cfg) {
  return canonical_body(cfg) + "output.dir = " + cfg.output_dir + "\n";
}

std::string manifest_hash(const RunConfig& cfg) {
  std::string key = std::string(kCodeVersion) + "\n" + canonical_body(cfg);
  if (cfg.initial.family == InitialFamily::file) key += read_text_file(cfg.initial.path);
  return fnv1a_hex(key);
}

RealField2D initial_field(const RunConfig& cfg) {
  const InitialSpec& in = cfg.initial;
  const GridSpec& g = cfg.grid;
  switch (in.family) {
    case InitialFamily::gaussian: {
      RealField2D u = sample(g, [&](double x, double y) {
        const double dx = (x - in.center_x) / in.width_x, dy = (y - in.center_y) / in.width_y;
        const double env = in.amplitude * std::exp(-dx * dx - dy * dy);
        return in.x_mean_removed ? (1.0 - 2.0 * dx * dx) * env : env;
      });
      if (in.x_mean_removed) {
        SpectralField2D s = to_spectral(u);
        for (int l = 0; l < g.ny(); ++l) s.at_index(0, l) = 0.0;
        u = to_physical(s);
      }
      return u;
    }
    case InitialFamily::single_mode: {
      const double kx = 2.0 * M_PI * in.mode_kx / g.lx(), ky = 2.0 * M_PI * in.mode_ky / g.ly();
      return sample(g, [&](double x, double y) { return in.amplitude * std::cos(kx * x + ky * y); });
    }
    case InitialFamily::file: {
      Snapshot s;
      try {
        s = read_snapshot(in.path);
      } catch (const Error& e) {
        throw ConfigError(std::string("[initial] ") + e.what());
      }
      if (!(s.field.grid == g)) throw ConfigError("[initial] snapshot grid does not match [grid]");
      return s.field;
    }
  }
  throw ConfigError("unknown initial family");
}

DiagnosticRow diagnose(double t, const SpectralField2D& state, const RealField2D& u, const RunConfig& cfg,
                       const std::vector<cplx>& zero_mode_ref) {
  const auto& d = cfg.diagnostics;
  DiagnosticRow r;
  r.t = t;
  r.mass = mass(state);
  r.hamiltonian = hamiltonian(u, state, cfg.solver.params);
  r.sob_x = bessel_norm(state, d.sobolev.s1, Axis::x);
  r.sob_y = bessel_norm(state, d.sobolev.s2, Axis::y);
  for (double N : d.N_ladder) r.wnorm_x.push_back(weighted_norm_x(u, d.r1, N));
  r.wnorm_y = weighted_norm_y(u, d.r2, std::numeric_limits<double>::infinity());
  r.zero_mode_maxdev = zero_mode_max_deviation(state, zero_mode_ref);
  r.xmom = x_moment(u, d.moment_eta).value;
  return r;
}

std::string csv_header(const RunConfig& cfg) {
  std::string h = "t,mass,hamiltonian,sob_x,sob_y";
  for (double N : cfg.diagnostics.N_ladder) h += ",wnorm_x_N" + ladder_label(N);
  h += ",wnorm_y,zero_mode_maxdev,xmom_re,xmom_im\n";
  return h;
}

std::string csv_row(const DiagnosticRow& r) {
  std::string s = format_double(r.t) + "," + format_double(r.mass) + "," + format_double(r.hamiltonian) + "," +
                  format_double(r.sob_x) + "," + format_double(r.sob_y);
  for (double w : r.wnorm_x) s += "," + format_double(w);
  s += "," + format_double(r.wnorm_y) + "," + format_double(r.zero_mode_maxdev) + "," + format_double(r.xmom.real()) +
       "," + format_double(r.xmom.imag()) + "\n";
  return s;
}

namespace {

std::string manifest_text(const RunConfig& cfg, const ScenarioResult& res) {
  std::ostringstream o;
  o << "# manifest " << res.hash << "\n"
    << "code.version = " << kCodeVersion << "\n"
    << canonical_config(cfg)
    << "quadrature.norms = trapezoidal on the grid, quadratic terms by Parseval\n"
    << "quadrature.fft = FFTW r2c/c2r, FFTW_ESTIMATE plans\n"
    << "quadrature.dealias = " << (cfg.solver.dealias ? "2/3 rule on the nonlinear term" : "none") << "\n"
    << "box.lx = " << format_double(cfg.grid.lx()) << "\n"
    << "box.ly = " << format_double(cfg.grid.ly()) << "\n"
    << "result.rows = " << res.rows.size() << "\n"
    << "result.max_boundary_ratio = " << format_double(res.max_boundary_ratio) << "\n"
    << "result.sup_energy_norm = " << format_double(res.sup_energy_norm) << "\n";
  if (res.blowup.occurred) {
    o << "result.blowup = true\n"
      << "result.blowup_time = " << format_double(res.blowup.time) << "\n"
      << "result.blowup_last_good_time = " << format_double(res.blowup.last_good_time) << "\n"
      << "result.blowup_mode = " << res.blowup.kx << ", " << res.blowup.ky << "\n"
      << "result.blowup_message = " << res.blowup.message << "\n";
  } else {
    o << "result.blowup = false\n";
  }
  for (const auto& s : res.snapshots) o << "snapshot = " << s << "\n";
  return o.str();
}

struct RunTrace {
  std::vector<DiagnosticRow> rows;
  BlowUpInfo blowup;
  double sup_energy = 0.0;
  double max_boundary = 0.0;
};

// Evolves cfg and calls per_row(t, state, u) at every diagnostic step.
template <class F>
BlowUpInfo drive(const RunConfig& cfg, const RealField2D& u0, F&& per_row, long snapshot_stride,
                 const std::function<void(long, double, const RealField2D&)>& on_snapshot) {
  BlowUpInfo info;
  Stepper st(cfg.grid, cfg.solver);
  st.load(to_spectral(u0));
  st.set_blowup_reference(u0.max_abs());
  const long steps = cfg.solver.steps();
  const long stride = cfg.diagnostics.stride;
  long last_row = 0;
  {
    RealField2D u = st.physical();
    per_row(st.time(), st.state(), u);
    if (snapshot_stride > 0) on_snapshot(0, st.time(), u);
  }
  for (long n = 1; n <= steps; ++n) {
    try {
      st.step();
    } catch (const BlowUpError& e) {
      info.occurred = true;
      info.time = e.time();
      info.last_good_time = st.time();
      info.kx = e.kx();
      info.ky = e.ky();
      info.message = e.what();
      if (st.step_index() != last_row) {
        RealField2D u = st.physical();
        per_row(st.time(), st.state(), u);
      }
      break;
    }
    const bool diag = n % stride == 0 || n == steps;
    const bool snap = snapshot_stride > 0 && (n % snapshot_stride == 0 || n == steps);
    if (diag || snap) {
      RealField2D u = st.physical();
      if (diag) {
        per_row(st.time(), st.state(), u);
        last_row = n;
      }
      if (snap) on_snapshot(n, st.time(), u);
    }
  }
  return info;
}

}  // namespace

ScenarioResult run_scenario(const RunConfig& cfg, bool write_files) {
  ScenarioResult res;
  res.hash = manifest_hash(cfg);
  const RealField2D u0 = initial_field(cfg);
  const std::vector<cplx> ref = zero_mode_slice(to_spectral(u0));
  const SobolevSpec es = SobolevSpec::energy(cfg.diagnostics.energy_s, cfg.solver.params.a);
  if (write_files) make_output_dir(cfg.output_dir);

  auto per_row = [&](double t, const SpectralField2D& s, const RealField2D& u) {
    res.rows.push_back(diagnose(t, s, u, cfg, ref));
    res.sup_energy_norm = std::max(res.sup_energy_norm, sobolev_norm(s, es));
    res.max_boundary_ratio = std::max(res.max_boundary_ratio, boundary_ratio(u));
  };
  auto on_snap = [&](long n, double t, const RealField2D& u) {
    char name[64];
    std::snprintf(name, sizeof name, "snap_%s_%08ld.gbzk", res.hash.substr(0, 8).c_str(), n);
    res.snapshots.push_back(name);
    if (write_files) write_snapshot((fs::path(cfg.output_dir) / name).string(), {u, cfg.solver.params.a, t});
  };
  res.blowup = drive(cfg, u0, per_row, cfg.diagnostics.snapshot_stride, on_snap);

  res.csv = "# manifest " + res.hash + "\n" + csv_header(cfg);
  for (const auto& r : res.rows) res.csv += csv_row(r);
  res.manifest = manifest_text(cfg, res);
  if (write_files) {
    write_text_file((fs::path(cfg.output_dir) / "diagnostics.csv").string(), res.csv);
    write_text_file((fs::path(cfg.output_dir) / "manifest.txt").string(), res.manifest);
  }
  return res;
}

namespace {

UcBranch run_branch(const RunConfig& cfg, const std::vector<double>& r1s) {
  UcBranch b;
  b.label = cfg.initial.x_mean_removed ? "zero_mean" : "nonzero_mean";
  b.hash = manifest_hash(cfg);
  const RealField2D u0 = initial_field(cfg);
  const std::vector<cplx> ref = zero_mode_slice(to_spectral(u0));
  const auto& ladder = cfg.diagnostics.N_ladder;
  b.wnorm.assign(r1s.size(), std::vector<std::vector<double>>(ladder.size()));
  std::vector<double> m0;
  auto per_row = [&](double t, const SpectralField2D& s, const RealField2D& u) {
    b.t.push_back(t);
    for (std::size_t i = 0; i < r1s.size(); ++i) {
      for (std::size_t j = 0; j < ladder.size(); ++j) b.wnorm[i][j].push_back(weighted_norm_x(u, r1s[i], ladder[j]));
      for (std::size_t j = 1; j < ladder.size(); ++j)
        if (b.wnorm[i][j].back() < b.wnorm[i][j - 1].back() * (1.0 - 1e-14)) b.ladder_monotone = false;
    }
    const double dev = zero_mode_max_deviation(s, ref);
    b.zero_mode_maxdev.push_back(dev);
    b.max_zero_mode_dev = std::max(b.max_zero_mode_dev, dev);
    const XMoment xm = x_moment(u, cfg.diagnostics.moment_eta);
    b.xmom.push_back(xm.value);
    b.max_boundary_ratio = std::max(b.max_boundary_ratio, xm.boundary_ratio);
    m0.push_back(cfg.diagnostics.moment_eta == 0.0 ? xm.value.real() : x_moment(u, 0.0).value.real());
    b.half_mass.push_back(0.5 * mass(s));
  };
  b.blowup = drive(cfg, u0, per_row, 0, {});
  double scale = 0.0;
  for (double h : b.half_mass) scale = std::max(scale, h);
  b.moment_residual.assign(b.t.size(), 0.0);
  for (std::size_t i = 1; i + 1 < b.t.size(); ++i) {
    const double d = (m0[i + 1] - m0[i - 1]) / (b.t[i + 1] - b.t[i - 1]);
    b.moment_residual[i] = d - b.half_mass[i];
    if (scale > 0.0) b.max_moment_residual = std::max(b.max_moment_residual, std::abs(b.moment_residual[i]) / scale);
  }
  return b;
}

std::string trend(const std::vector<double>& v) {
  if (v.size() < 2 || v.front() == 0.0) return "n/a";
  return format_double(v.back() / v.front());
}

}  // namespace

UcCompareResult uc_compare(const RunConfig& a, const RunConfig& b, bool write_files) {
  RunConfig a2 = a, b2 = b;
  a2.output_dir = b2.output_dir = "";
  a2.initial.x_mean_removed = b2.initial.x_mean_removed = false;
  if (canonical_config(a2) != canonical_config(b2))
    throw ConfigError("uc-compare: the configurations differ in more than the x-mean flag");
  if (a.initial.x_mean_removed == b.initial.x_mean_removed)
    throw ConfigError("uc-compare: exactly one configuration must set x_mean_removed");
  if (a.initial.family != InitialFamily::gaussian)
    throw ConfigError("uc-compare: the gaussian initial family is required");

  UcCompareResult res;
  const double alpha = a.solver.params.a;
  res.r1_values = {2.0, 2.5 + alpha, 3.5 + alpha};
  res.N_ladder = a.diagnostics.N_ladder;
  const RunConfig* cfgs[2] = {a.initial.x_mean_removed ? &a : &b, a.initial.x_mean_removed ? &b : &a};
  UcBranch out[2];
  parallel_for(2, [&](std::size_t i) { out[i] = run_branch(*cfgs[i], res.r1_values); });
  res.zero_mean = std::move(out[0]);
  res.nonzero_mean = std::move(out[1]);

  const std::string hash = fnv1a_hex(res.zero_mean.hash + res.nonzero_mean.hash);
  std::ostringstream csv;
  csv << "# manifest " << hash << "\n";
  csv << "t";
  for (const UcBranch* br : {&res.zero_mean, &res.nonzero_mean}) {
    for (double r : res.r1_values)
      for (double N : res.N_ladder) csv << "," << br->label << "_wnorm_r" << format_double(r) << "_N" << ladder_label(N);
    csv << "," << br->label << "_zero_mode_maxdev," << br->label << "_xmom_re," << br->label << "_xmom_im,"
        << br->label << "_moment_residual";
  }
  csv << "\n";
  const std::size_t rows = std::min(res.zero_mean.t.size(), res.nonzero_mean.t.size());
  for (std::size_t k = 0; k < rows; ++k) {
    csv << format_double(res.zero_mean.t[k]);
    for (const UcBranch* br : {&res.zero_mean, &res.nonzero_mean}) {
      for (std::size_t i = 0; i < res.r1_values.size(); ++i)
        for (std::size_t j = 0; j < res.N_ladder.size(); ++j) csv << "," << format_double(br->wnorm[i][j][k]);
      csv << "," << format_double(br->zero_mode_maxdev[k]) << "," << format_double(br->xmom[k].real()) << ","
          << format_double(br->xmom[k].imag()) << "," << format_double(br->moment_residual[k]);
    }
    csv << "\n";
  }
  res.csv = csv.str();

  std::ostringstream rep;
  rep << "# manifest " << hash << "\n";
  rep << "Unique-continuation comparison on the periodic box " << format_double(a.grid.lx()) << " x "
      << format_double(a.grid.ly()) << ", a = " << format_double(alpha) << ", T = " << format_double(a.solver.T)
      << "\n";
  rep << "All norms are box-truncated proxies; a periodic box cannot show that a norm on the whole plane is infinite.\n\n";
  for (const UcBranch* br : {&res.zero_mean, &res.nonzero_mean}) {
    rep << "[" << br->label << "] manifest " << br->hash << "\n";
    rep << "  max zero-mode deviation      = " << format_double(br->max_zero_mode_dev) << "\n";
    rep << "  max moment-identity residual = " << format_double(br->max_moment_residual)
        << " (relative to max of (1/2) integral u^2)\n";
    rep << "  max boundary ratio           = " << format_double(br->max_boundary_ratio) << "\n";
    rep << "  N-ladder nondecreasing       = " << (br->ladder_monotone ? "yes" : "no") << "\n";
    if (br->blowup.occurred) rep << "  blow-up at t = " << format_double(br->blowup.time) << "\n";
    for (std::size_t i = 0; i < res.r1_values.size(); ++i) {
      rep << "  r1 = " << format_double(res.r1_values[i]) << ": growth factor w(T)/w(0) per N:";
      for (std::size_t j = 0; j < res.N_ladder.size(); ++j)
        rep << " N=" << ladder_label(res.N_ladder[j]) << ":" << trend(br->wnorm[i][j]);
      rep << "\n";
    }
    rep << "\n";
  }
  rep << "Observed trends only. Growth of the truncated norms with N at fixed t indicates mass at large |x| within the box.\n";
  res.report = rep.str();

  if (write_files) {
    make_output_dir(a.output_dir);
    write_text_file((fs::path(a.output_dir) / "uc_compare.csv").string(), res.csv);
    write_text_file((fs::path(a.output_dir) / "uc_report.txt").string(), res.report);
  }
  return res;
}

int worker_count() {
  const char* env = std::getenv("GBZK_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gbzk
