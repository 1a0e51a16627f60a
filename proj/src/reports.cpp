#include "gbzk/reports.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gbzk/error.hpp"
#include "gbzk/jet.hpp"
#include "gbzk/scenario.hpp"
#include "gbzk/spectral.hpp"

namespace gbzk {

namespace {

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

Membership threshold_verdict(const std::string& family, double exponent, double theta) {
  if (family == "power" || family == "signed_power") {
    // x^k phi is smooth for the matching parity of k, hence in every class with theta < 2
    const double k = std::round(exponent);
    const bool smooth = exponent == k && std::fmod(k, 2.0) == (family == "power" ? 0.0 : 1.0);
    return smooth || theta < exponent + 0.5 ? Membership::member : Membership::non_member;
  }
  if (family == "gamma") return theta < exponent ? Membership::member : Membership::non_member;
  throw InvalidArgument("no threshold rule for family '" + family + "'");
}

SteinBatch parse_stein_batch(const std::string& text, const std::string& origin) {
  const IniDocument doc = parse_ini(text, origin);
  check_sections(doc, {"membership", "query.*"});
  SteinBatch batch;
  std::ostringstream canon;

  SectionReader mem(doc, "membership");
  auto& m = batch.membership;
  m.first_decade = static_cast<int>(mem.integer("first_decade", m.first_decade));
  m.last_decade = static_cast<int>(mem.integer("last_decade", m.last_decade));
  m.nodes = static_cast<int>(mem.integer("nodes", m.nodes));
  m.slope_band = mem.number("slope_band", m.slope_band);
  if (m.first_decade < 1 || m.last_decade - m.first_decade < 2 || m.last_decade > 12)
    throw ConfigError("[membership] need 1 <= first_decade and last_decade - first_decade >= 2, last_decade <= 12",
                      mem.line_of("last_decade"));
  if (m.nodes < 2) throw ConfigError("[membership] nodes must be >= 2", mem.line_of("nodes"));
  if (!(m.slope_band >= 0.0)) throw ConfigError("[membership] slope_band must be >= 0", mem.line_of("slope_band"));
  mem.finish();
  canon << "membership = " << m.first_decade << " " << m.last_decade << " " << m.nodes << " "
        << format_double(m.slope_band) << "\n";

  for (const IniSection& sec : doc.sections) {
    if (sec.name.rfind("query.", 0) != 0) continue;
    SectionReader r(sec);
    SteinBatchQuery q;
    q.name = sec.name.substr(6);
    if (q.name.empty()) throw ConfigError("query section needs a name", sec.line);
    q.family = r.text("family", "");
    const double theta = r.number("theta");
    q.query.b = theta;
    if (!(theta > 0.0 && theta < 2.0)) throw ConfigError("[" + sec.name + "] theta must lie in (0, 2)", r.line_of("theta"));
    q.query.points = r.numbers("points", {});
    const bool singular = q.family == "power" || q.family == "signed_power" || q.family == "gamma";
    if (singular) {
      const double e = r.number("exponent");
      if (!(e > -0.5) || !std::isfinite(e))
        throw ConfigError("[" + sec.name + "] exponent must exceed -1/2", r.line_of("exponent"));
      q.query.exponent = e;
      q.query.kind = q.family == "power" ? ProfileKind::power
                     : q.family == "signed_power" ? ProfileKind::signed_power
                                                  : ProfileKind::gamma;
      if (q.family == "gamma" && !(e > 0.0))
        throw ConfigError("[" + sec.name + "] gamma must be positive", r.line_of("exponent"));
      q.params = {e};
    } else if (q.family == "gaussian") {
      q.params = {r.number("amplitude", 1.0), r.number("center", 0.0), r.number("width", 1.0)};
      if (!(q.params[2] > 0.0)) throw ConfigError("[" + sec.name + "] width must be positive", r.line_of("width"));
      q.query.kind = ProfileKind::user;
      q.query.user = gaussian_target(q.params[0], q.params[1], q.params[2]);
    } else if (q.family == "plane_wave") {
      q.params = {r.number("k")};
      q.query.kind = ProfileKind::user;
      q.query.user = plane_wave(q.params[0]);
    } else if (q.family == "dispersive_phase") {
      q.params = {r.number("t"), r.number("a")};
      if (!(q.params[1] >= 0.0 && q.params[1] <= 1.0))
        throw ConfigError("[" + sec.name + "] a must lie in [0, 1]", r.line_of("a"));
      q.query.kind = ProfileKind::user;
      q.query.user = dispersive_phase(q.params[0], q.params[1]);
    } else {
      throw ConfigError("[" + sec.name + "] unknown family '" + q.family + "'", r.line_of("family"));
    }
    q.classify = r.flag("classify", singular);
    if (q.classify && !singular)
      throw ConfigError("[" + sec.name + "] classify applies to power, signed_power and gamma", r.line_of("classify"));
    const std::string ex = r.text("expected", singular ? "auto" : "none");
    if (ex == "auto") q.expected = ExpectedVerdict::automatic;
    else if (ex == "member") q.expected = ExpectedVerdict::member;
    else if (ex == "non-member" || ex == "non_member") q.expected = ExpectedVerdict::non_member;
    else if (ex == "none") q.expected = ExpectedVerdict::none;
    else throw ConfigError("[" + sec.name + "] expected must be auto, member, non-member or none", r.line_of("expected"));
    if (q.expected == ExpectedVerdict::automatic && !singular)
      throw ConfigError("[" + sec.name + "] expected = auto needs a singular family", r.line_of("expected"));
    q.slope_window = r.numbers("slope_window", {});
    if (!q.slope_window.empty() &&
        (q.slope_window.size() != 2 || !(q.slope_window[0] > 0.0) || !(q.slope_window[1] > q.slope_window[0])))
      throw ConfigError("[" + sec.name + "] slope_window must be lo, hi with 0 < lo < hi", r.line_of("slope_window"));
    r.finish();
    canon << "query " << q.name << " family=" << q.family << " params=" << join(q.params)
          << " theta=" << format_double(theta) << " points=" << join(q.query.points) << " classify=" << q.classify
          << " expected=" << ex << " slope_window=" << join(q.slope_window) << "\n";
    batch.queries.push_back(std::move(q));
  }
  batch.canonical = canon.str();
  return batch;
}

SteinBatch load_stein_batch(const std::string& path) {
  read_ini_file(path);
  try {
    return parse_stein_batch(read_text_file(path), path);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

bool SteinReport::all_expected_match() const {
  for (const auto& v : verdicts)
    if (v.has_expected && v.evidence.verdict != v.expected) return false;
  return true;
}

SteinReport stein_report(const SteinBatch& batch) {
  SteinReport rep;
  rep.hash = fnv1a_hex(std::string(kCodeVersion) + "\nstein\n" + batch.canonical);
  const std::size_t n = batch.queries.size();
  std::vector<std::vector<SteinValue>> values(n);
  std::vector<SteinVerdictRow> rows(n);
  parallel_for(n, [&](std::size_t i) {
    const SteinBatchQuery& q = batch.queries[i];
    if (!q.query.points.empty()) values[i] = dstein_profile(q.query);
    if (!q.classify && q.slope_window.empty()) return;
    SteinVerdictRow& row = rows[i];
    const SteinTarget target = query_target(q.query);
    row.name = q.name;
    row.family = q.family;
    row.exponent = q.query.exponent;
    row.theta = q.query.b;
    if (q.classify) {
      row.evidence = l2_membership_classify(target, q.query.b, batch.membership);
      const std::size_t tail = std::min<std::size_t>(4, row.evidence.eps.size());
      row.fit_lo = std::pow(10.0, -batch.membership.last_decade - 1);
      row.fit_hi = row.evidence.eps[row.evidence.eps.size() - tail];
    }
    if (q.expected == ExpectedVerdict::automatic) {
      row.has_expected = true;
      row.expected = threshold_verdict(q.family, q.query.exponent, q.query.b);
    } else if (q.expected != ExpectedVerdict::none) {
      row.has_expected = true;
      row.expected = q.expected == ExpectedVerdict::member ? Membership::member : Membership::non_member;
    }
    if (!q.slope_window.empty()) {
      row.has_slope = true;
      row.slope = stein_slope(target, q.query.b, q.slope_window[0], q.slope_window[1]);
    }
  });

  std::ostringstream v;
  v << "# manifest " << rep.hash << "\n";
  v << "query,family,theta,x,value,squared,error,converged\n";
  for (std::size_t i = 0; i < n; ++i) {
    const SteinBatchQuery& q = batch.queries[i];
    for (std::size_t j = 0; j < values[i].size(); ++j) {
      const SteinValue& s = values[i][j];
      v << csv_field(q.name) << "," << q.family << "," << format_double(q.query.b) << ","
        << format_double(q.query.points[j]) << "," << format_double(s.value) << "," << format_double(s.squared) << ","
        << format_double(s.error) << "," << (s.converged ? "true" : "false") << "\n";
    }
  }
  rep.values_csv = v.str();

  std::ostringstream d;
  d << "# manifest " << rep.hash << "\n";
  d << "query,family,exponent,theta,verdict,expected,match,growth_exponent,growth_exponent_ci,fit_lo,fit_hi,"
       "slope_lo,slope_hi,slope,slope_ci,slope_r2,reason\n";
  for (std::size_t i = 0; i < n; ++i) {
    const SteinBatchQuery& q = batch.queries[i];
    if (!q.classify && q.slope_window.empty()) continue;
    const SteinVerdictRow& r = rows[i];
    d << csv_field(r.name) << "," << r.family << "," << format_double(r.exponent) << "," << format_double(r.theta) << ",";
    if (q.classify) d << to_string(r.evidence.verdict);
    d << "," << (r.has_expected ? to_string(r.expected) : "") << ",";
    if (r.has_expected && q.classify) d << (r.evidence.verdict == r.expected ? "yes" : "no");
    d << ",";
    if (q.classify)
      d << format_double(r.evidence.exponent) << "," << format_double(r.evidence.exponent_ci) << ","
        << format_double(r.fit_lo) << "," << format_double(r.fit_hi);
    else
      d << ",,,";
    d << ",";
    if (r.has_slope)
      d << format_double(q.slope_window[0]) << "," << format_double(q.slope_window[1]) << ","
        << format_double(r.slope.slope) << "," << format_double(r.slope.slope_ci) << "," << format_double(r.slope.r2);
    else
      d << ",,,,";
    d << "," << csv_field(q.classify ? r.evidence.reason : "") << "\n";
    rep.verdicts.push_back(r);
  }
  rep.verdicts_csv = d.str();
  return rep;
}

std::vector<double> default_expansion_xi() {
  return {-3.0, -2.1, -1.3, -0.6, -0.1, 0.1, 0.45, 1.0, 1.8, 2.7};
}

std::vector<double> default_expansion_eta() {
  return {-2.5, -1.9, -1.2, -0.7, -0.2, 0.0, 0.4, 1.1, 1.7, 2.4};
}

ExpansionSpec parse_expansion_spec(const std::string& text, const std::string& origin) {
  const IniDocument doc = parse_ini(text, origin);
  check_sections(doc, {"check", "jet", "output"});
  ExpansionSpec s;
  SectionReader c(doc, "check");
  s.a = c.number("a", s.a);
  if (!(s.a >= 0.0 && s.a <= 1.0)) throw ConfigError("[check] a must lie in [0, 1]", c.line_of("a"));
  const std::vector<double> orders = c.numbers("orders", {1, 2, 3, 4});
  s.orders.clear();
  for (double k : orders) {
    if (k != std::floor(k) || k < 1 || k > 4) throw ConfigError("[check] orders must be integers in 1..4", c.line_of("orders"));
    s.orders.push_back(static_cast<int>(k));
  }
  s.times = c.numbers("t", s.times);
  s.xi = c.numbers("xi", default_expansion_xi());
  s.eta = c.numbers("eta", default_expansion_eta());
  s.threshold = c.number("threshold", s.threshold);
  for (double x : s.xi)
    if (!(std::abs(x) >= 0.1)) throw ConfigError("[check] every xi needs |xi| >= 0.1", c.line_of("xi"));
  if (s.xi.empty() || s.eta.empty() || s.times.empty() || s.orders.empty())
    throw ConfigError("[check] orders, t, xi and eta must be nonempty", c.line_of("xi"));
  c.finish();
  SectionReader j(doc, "jet");
  s.amplitude = j.number("amplitude", s.amplitude);
  s.xi0 = j.number("xi0", s.xi0);
  s.s_xi = j.number("s_xi", s.s_xi);
  s.s_eta = j.number("s_eta", s.s_eta);
  s.x0 = j.number("x0", s.x0);
  if (!(s.s_xi > 0.0) || !(s.s_eta > 0.0)) throw ConfigError("[jet] widths must be positive", j.line_of("s_xi"));
  j.finish();
  SectionReader o(doc, "output");
  s.output_dir = o.text("dir", "");
  o.finish();

  std::ostringstream canon;
  canon << "a=" << format_double(s.a) << " orders=";
  for (int k : s.orders) canon << k << ";";
  canon << " t=" << join(s.times) << " xi=" << join(s.xi) << " eta=" << join(s.eta)
        << " threshold=" << format_double(s.threshold) << " jet=" << format_double(s.amplitude) << ";"
        << format_double(s.xi0) << ";" << format_double(s.s_xi) << ";" << format_double(s.s_eta) << ";"
        << format_double(s.x0) << "\n";
  s.canonical = canon.str();
  return s;
}

bool ExpansionReportSet::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const ExpansionCheckReport& r) { return r.passed(); });
}

ExpansionReportSet expansion_report(const ExpansionSpec& spec) {
  ExpansionReportSet out;
  out.hash = fnv1a_hex(std::string(kCodeVersion) + "\nexpansion\n" + spec.canonical);
  const GaussianJet jet(spec.amplitude, spec.xi0, spec.s_xi, spec.s_eta, spec.x0);
  const DispersionParams params = DispersionParams::checked(spec.a);
  std::vector<std::pair<int, double>> cases;
  for (int k : spec.orders)
    for (double t : spec.times) cases.emplace_back(k, t);
  out.reports.resize(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    out.reports[i] = xi_expansion_check(cases[i].first, cases[i].second, params, jet, spec.xi, spec.eta, spec.threshold);
  });

  std::ostringstream csv, txt;
  csv << "# manifest " << out.hash << "\n";
  csv << "k,t,a,points,max_rel_error,median_rel_error,max_abs_error,corrected_max_rel_error,"
         "faa_di_bruno_max_rel_error,flagged_terms,table_ok,passed\n";
  txt << "# manifest " << out.hash << "\n";
  for (const auto& r : out.reports) {
    std::string flagged;
    for (std::size_t i = 0; i < r.flagged_terms.size(); ++i) flagged += (i ? ";" : "") + r.flagged_terms[i];
    csv << r.k << "," << format_double(r.t) << "," << format_double(r.a) << "," << r.points << ","
        << format_double(r.max_rel_error) << "," << format_double(r.median_rel_error) << ","
        << format_double(r.max_abs_error) << "," << format_double(r.corrected_max_rel_error) << ","
        << format_double(r.faa_di_bruno_max_rel_error) << "," << flagged << "," << (r.table_ok() ? "yes" : "no")
        << "," << (r.passed() ? "yes" : "no") << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "k=%d t=%-4g max rel err %.3e (corrected table %.3e, Faa di Bruno %.3e) %s", r.k,
                  r.t, r.max_rel_error, r.corrected_max_rel_error, r.faa_di_bruno_max_rel_error,
                  r.passed() ? "ok" : "FAILED");
    txt << line;
    if (!r.flagged_terms.empty()) txt << " flagged terms: " << flagged;
    txt << "\n";
  }
  out.csv = csv.str();
  out.text = txt.str();
  return out;
}

std::vector<NormRequest> parse_norm_requests(const std::string& text, double a, const std::string& origin) {
  const IniDocument doc = parse_ini(text, origin);
  check_sections(doc, {"weight.*", "sobolev.*"});
  std::vector<NormRequest> out;
  for (const IniSection& sec : doc.sections) {
    SectionReader r(sec);
    NormRequest q;
    if (sec.name.rfind("weight.", 0) == 0) {
      q.name = sec.name.substr(7);
      q.kind = "weight";
      q.weight.r1 = r.number("r1", 0.0);
      q.weight.r2 = r.number("r2", 0.0);
      q.weight.N = r.number("N", q.weight.N);
      if (q.weight.r1 < 0.0 || q.weight.r2 < 0.0)
        throw ConfigError("[" + sec.name + "] r1, r2 must be nonnegative", r.line_of("r1"));
      if (!(q.weight.N >= 1.0 / std::sqrt(3.0)))
        throw ConfigError("[" + sec.name + "] N must be >= 1/sqrt(3)", r.line_of("N"));
    } else {
      q.name = sec.name.substr(8);
      q.kind = "sobolev";
      if (r.has("s")) {
        if (r.has("s1") || r.has("s2")) throw ConfigError("[" + sec.name + "] give either s or s1, s2", r.line_of("s"));
        q.sobolev = SobolevSpec::energy(r.number("s"), a);
      } else {
        q.sobolev.s1 = r.number("s1", 0.0);
        q.sobolev.s2 = r.number("s2", 0.0);
      }
    }
    if (q.name.empty()) throw ConfigError("section needs a name", sec.line);
    r.finish();
    out.push_back(q);
  }
  return out;
}

std::string norms_report(const Snapshot& snap, const std::vector<NormRequest>& requests, const std::string& hash) {
  const SpectralField2D s = to_spectral(snap.field);
  const DispersionParams params = DispersionParams::checked(snap.a);
  std::ostringstream o;
  o << "# manifest " << hash << "\n";
  o << "name,kind,r1,r2,N,s1,s2,value\n";
  o << "mass,invariant,,,,,," << format_double(mass(s)) << "\n";
  o << "hamiltonian,invariant,,,,,," << format_double(hamiltonian(snap.field, s, params)) << "\n";
  o << "l2,norm,,,,,," << format_double(l2_norm(s)) << "\n";
  for (const auto& q : requests) {
    if (q.kind == "weight")
      o << csv_field(q.name) << ",weight," << format_double(q.weight.r1) << "," << format_double(q.weight.r2) << ","
        << format_double(q.weight.N) << ",,," << format_double(weighted_norm(snap.field, q.weight)) << "\n";
    else
      o << csv_field(q.name) << ",sobolev,,,," << format_double(q.sobolev.s1) << "," << format_double(q.sobolev.s2)
        << "," << format_double(sobolev_norm(s, q.sobolev)) << "\n";
  }
  return o.str();
}

}  // namespace gbzk
