#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "chemofront/errors.hpp"
#include "chemofront/harness.hpp"

namespace chemofront {
namespace {

// JSON has no inf/nan; those are written as strings.
Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

Json hypotheses_json(const HypothesisReport& h) {
  return {{"M", number(h.M)},
          {"K", number(h.K)},
          {"M0", number(h.M0)},
          {"m0", number(h.m0)},
          {"M0_valid", h.M0_valid},
          {"m0_positive", h.m0_positive},
          {"h1_holds", h.h1_holds},
          {"h2_holds", h.h2_holds},
          {"h3_holds", h.h3_holds},
          {"h1_margin", number(h.h1_margin)},
          {"h2_margin", number(h.h2_margin)},
          {"h3_margin", number(h.h3_margin)}};
}

Json diagnostics_json(const RunDiagnostics& d) {
  return {{"steps", d.steps},
          {"max_sup_u", number(d.max_sup_u)},
          {"max_combo_residual", number(d.max_combo_residual)},
          {"max_gradient_residual", number(d.max_gradient_residual)},
          {"max_front_speed", number(d.max_h_prime)},
          {"min_front_speed", number(d.min_h_prime)},
          {"max_sup_increase_above_M0", number(d.max_sup_increase_above_M0)},
          {"uniform_bound", number(d.uniform_bound)}};
}

SnapshotTable table_of(double t, double left, double length, const std::vector<double>& u,
                       const std::vector<double>& v1, const std::vector<double>& v2) {
  SnapshotTable tab;
  tab.t = t;
  tab.left = left;
  tab.length = length;
  const std::size_t n = u.size();
  for (std::size_t j = 0; j < n; ++j) tab.y.push_back(static_cast<double>(j) / static_cast<double>(n - 1));
  tab.u = u;
  tab.v1 = v1.empty() ? std::vector<double>(n, 0.0) : v1;
  tab.v2 = v2.empty() ? std::vector<double>(n, 0.0) : v2;
  return tab;
}

SnapshotTable snapshot_of(const FrontState& s) { return table_of(s.t, 0.0, s.h, s.u, s.v1, s.v2); }
SnapshotTable snapshot_of(const DoubleFrontState& s) { return table_of(s.t, s.g, s.width(), s.u, s.v1, s.v2); }
SnapshotTable snapshot_of(const HalfLineState& s) { return table_of(s.t, 0.0, s.L, s.u, s.v1, s.v2); }

Json snapshot_index(const std::vector<SnapshotTable>& snaps) {
  Json out = Json::array();
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    out.push_back({{"file", "snapshot_" + std::to_string(k) + ".csv"},
                   {"t", snaps[k].t},
                   {"left", snaps[k].left},
                   {"length", snaps[k].length}});
  }
  return out;
}

std::string error_class(const std::exception_ptr& ep, std::string& message) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    message = e.what();
    return "config_error";
  } catch (const AssertionFailure& e) {
    message = e.what();
    return "assertion_failure";
  } catch (const std::exception& e) {
    message = e.what();
    return "run_failure";
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string value_text(const Json& v) {
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot open " + p.string() + " for writing");
  os << text;
}

}  // namespace

RunReport execute(const Json& config) {
  RunReport rep;
  rep.kind = config.at("geometry").at("kind");
  rep.digest = config_digest(config);
  const ModelParams p = model_from(config);
  const CoefficientField c = coefficients_from(config);
  const InitialProfile init = initial_from(config);
  ClassifyThresholds th = thresholds_from(config);
  const SpectrumOptions sopts = spectrum_options_from(config);
  const double spec_tol = config["spectrum"]["tol"];
  const Json& geo = config["geometry"];
  const Json& time = config["time"];
  const Json& diag = config["diagnostics"];
  const int grid_n = config["grid_n"];
  const bool allow_h1 = config["allow_h1_violation"];
  const std::vector<double> snaps = config["snapshots"].get<std::vector<double>>();
  const double probe = config["classify"]["probe_length"];

  Json m = {{"kind", rep.kind}, {"digest", rep.digest}, {"grid_n", grid_n}};

  if (rep.kind == "single") {
    FrontRunConfig fr;
    fr.params = p;
    fr.coefficients = c;
    fr.h0 = geo["h0"];
    fr.initial = init;
    fr.grid_n = grid_n;
    fr.t0 = time["t0"];
    fr.t_end = time["t_end"];
    fr.dt_max = time["dt_max"];
    fr.sample_interval = time["sample_interval"];
    fr.allow_h1_violation = allow_h1;
    fr.bound_tolerance = diag["bound_tolerance"];
    fr.monotone_tolerance = diag["monotone_tolerance"];
    fr.blowup_guard = diag["blowup_guard"];
    fr.enforce_bounds = diag["enforce_bounds"];
    fr.snapshot_times = snaps;
    fr.l_star = find_l_star(c, spec_tol, sopts);
    fr.h_max = config["h_max"].get<double>() > 0.0 ? config["h_max"].get<double>() : 50.0 * fr.l_star;
    fr.probe_length = probe > 0.0 ? probe : fr.l_star;
    th.h_max = fr.h_max;
    th.validate();
    if (time["stop_on_verdict"].get<bool>()) {
      const double ls = fr.l_star;
      fr.stop_when = [ls, th](const RunSeries& s) { return classify(s, ls, th).verdict != Verdict::Undetermined; };
    }
    FrontRunResult r = run(fr);
    rep.series = std::move(r.series);
    rep.outcome = classify(rep.series, r.l_star, th);
    rep.verdict = to_string(rep.outcome.verdict);
    const double tol = diag["vanishing_width_tolerance"];
    if (rep.outcome.verdict == Verdict::Vanishing && r.final_state.h > r.l_star + tol) {
      std::ostringstream os;
      os << "vanishing with h = " << r.final_state.h << " above l* + " << tol << " = " << r.l_star + tol;
      throw AssertionFailure(os.str());
    }
    for (const FrontState& s : r.snapshots) rep.snapshots.push_back(snapshot_of(s));
    rep.final_profile = snapshot_of(r.final_state);
    m["l_star"] = number(r.l_star);
    m["h_max"] = number(r.h_max);
    m["probe_length"] = number(r.probe_length);
    m["reached_cap"] = r.reached_cap;
    m["final_t"] = number(r.final_state.t);
    m["final_h"] = number(r.final_state.h);
    m["hypotheses"] = hypotheses_json(r.hypotheses);
    m["diagnostics"] = diagnostics_json(r.diagnostics);
  } else if (rep.kind == "double") {
    DoubleRunConfig dr;
    dr.params = p;
    dr.coefficients = c;
    dr.g0 = geo["g0"];
    dr.h0 = geo["h0"];
    dr.initial = init;
    dr.grid_n = grid_n;
    dr.t0 = time["t0"];
    dr.t_end = time["t_end"];
    dr.dt_max = time["dt_max"];
    dr.sample_interval = time["sample_interval"];
    dr.h_max = config["h_max"];
    dr.probe_half_width = probe;
    dr.allow_h1_violation = allow_h1;
    dr.bound_tolerance = diag["bound_tolerance"];
    dr.monotone_tolerance = diag["monotone_tolerance"];
    dr.blowup_guard = diag["blowup_guard"];
    dr.enforce_bounds = diag["enforce_bounds"];
    dr.vanishing_width_tolerance = diag["vanishing_width_tolerance"];
    dr.check_symmetry = geo["check_symmetry"];
    dr.symmetry_tolerance = geo["symmetry_tolerance"];
    dr.thresholds = th;
    dr.stop_on_verdict = time["stop_on_verdict"];
    dr.snapshot_times = snaps;
    dr.l_star_star = find_l_star_star(c, spec_tol, sopts);
    DoubleRunResult r = run_double(dr);
    rep.series = std::move(r.series);
    rep.outcome = r.outcome;
    rep.verdict = to_string(r.outcome.verdict);
    for (const DoubleFrontState& s : r.snapshots) rep.snapshots.push_back(snapshot_of(s));
    rep.final_profile = snapshot_of(r.final_state);
    m["l_star_star"] = number(r.l_star_star);
    m["h_max"] = number(r.h_max);
    m["center"] = number(r.center);
    m["probe_half_width"] = number(r.probe_half_width);
    m["reached_cap"] = r.reached_cap;
    m["final_t"] = number(r.final_state.t);
    m["final_g"] = number(r.final_state.g);
    m["final_h"] = number(r.final_state.h);
    m["max_symmetry_error"] = number(r.max_symmetry_error);
    m["hypotheses"] = hypotheses_json(r.hypotheses);
    m["diagnostics"] = diagnostics_json(r.diagnostics);
  } else if (rep.kind == "halfline") {
    HalfLineConfig hc;
    hc.params = p;
    hc.coefficients = c;
    hc.L = geo["L"];
    hc.initial = init;
    hc.grid_n = grid_n;
    hc.t0 = time["t0"];
    hc.t_end = time["t_end"];
    hc.dt_max = time["dt_max"];
    hc.sample_interval = time["sample_interval"];
    hc.probe_length = probe;
    hc.transient = time["transient"];
    hc.persistence_tolerance = diag["persistence_tolerance"];
    hc.allow_h1_violation = allow_h1;
    hc.blowup_guard = diag["blowup_guard"];
    hc.snapshot_times = snaps;
    HalfLineResult r = run_halfline(hc);
    rep.series = std::move(r.series);
    const Sample& last = rep.series.back();
    rep.outcome.final_sup_u = last.sup_u;
    rep.outcome.l_star = r.l_star;
    rep.verdict = last.inf_u_window >= th.delta_s ? "Persists" : last.sup_u < th.eps_v ? "Decays" : "Undetermined";
    for (const HalfLineState& s : r.snapshots) rep.snapshots.push_back(snapshot_of(s));
    rep.final_profile = snapshot_of(r.final_state);
    m["l_star"] = number(r.l_star);
    m["L"] = number(r.final_state.L);
    m["final_t"] = number(r.final_state.t);
    m["persistence_checked"] = r.persistence_checked;
    m["interior_min"] = number(r.interior_min);
    m["interior_max"] = number(r.interior_max);
    m["hypotheses"] = hypotheses_json(r.hypotheses);
  } else {
    FixedRunConfig fc;
    fc.t0 = time["t0"];
    fc.t_end = time["t_end"];
    fc.dt_max = time["dt_max"];
    fc.sample_interval = time["sample_interval"];
    fc.transient = time["transient"];
    fc.persist_floor = th.delta_s;
    fc.decay_threshold = th.eps_v;
    fc.assert_persistence = diag["enforce_bounds"];
    std::vector<double> u0(static_cast<std::size_t>(grid_n));
    for (int j = 0; j < grid_n; ++j) u0[static_cast<std::size_t>(j)] = init(static_cast<double>(j) / (grid_n - 1));
    const Sampler beta_s = sampler_from(geo["beta"]);
    DriftField beta;
    if (!(beta_s.constant_value() && *beta_s.constant_value() == 0.0)) {
      beta = [beta_s](double t, double x) { return beta_s(t, x); };
    }
    FixedRunResult r;
    if (geo["bc"] == "mixed") {
      u0.back() = std::abs(u0.back()) <= 1e-12 * std::max(1.0, sup_norm(u0)) ? 0.0 : u0.back();
      r = run_fixed_mixed(beta, c, geo["l"], u0, fc);
    } else {
      if (c.kind() != CoefficientKind::Constant) {
        throw ConfigError("dirichlet fixed-domain runs take constant coefficients");
      }
      for (double* end : {&u0.front(), &u0.back()}) {
        if (std::abs(*end) <= 1e-12 * std::max(1.0, sup_norm(u0))) *end = 0.0;
      }
      r = run_fixed_dirichlet(beta, c.bounds().a_inf, c.bounds().b_inf, geo["l1"], geo["l2"], u0, fc);
    }
    rep.series = std::move(r.series);
    rep.outcome.final_sup_u = rep.series.back().sup_u;
    rep.verdict = to_string(r.verdict);
    rep.final_profile = table_of(r.t, r.x.front(), r.x.back() - r.x.front(), r.u, {}, {});
    m["principal_exponent"] = number(r.principal_exponent);
    m["beta_sup"] = number(r.beta_sup);
    m["min_sup_after_transient"] = number(r.min_sup_after_transient);
    m["final_t"] = number(r.t);
  }
  rep.series.config_digest = rep.digest;
  m["verdict"] = rep.verdict;
  m["h_infinity_estimate"] = number(rep.outcome.h_infinity_estimate);
  if (rep.kind == "double") m["g_infinity_estimate"] = number(rep.outcome.g_infinity_estimate);
  m["final_sup_u"] = number(rep.outcome.final_sup_u);
  m["samples"] = rep.series.samples.size();
  m["snapshots"] = snapshot_index(rep.snapshots);
  m["config"] = config;
  rep.manifest = std::move(m);
  return rep;
}

void write_run_outputs(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_csv((fs::path(dir) / "series.csv").string(), report.series);
  write_text(fs::path(dir) / "manifest.json", report.manifest.dump(2) + "\n");
  for (std::size_t k = 0; k < report.snapshots.size(); ++k) {
    const SnapshotTable& s = report.snapshots[k];
    std::ostringstream os;
    os << "y,u,v1,v2\n";
    for (std::size_t j = 0; j < s.u.size(); ++j) {
      os << format_number(s.y[j]) << ',' << format_number(s.u[j]) << ',' << format_number(s.v1[j]) << ','
         << format_number(s.v2[j]) << '\n';
    }
    write_text(fs::path(dir) / ("snapshot_" + std::to_string(k) + ".csv"), os.str());
  }
}

Json spectrum_report(const Json& config) {
  const CoefficientField c = coefficients_from(config);
  const SpectrumOptions o = spectrum_options_from(config);
  const double tol = config["spectrum"]["tol"];
  const Json& geo = config["geometry"];
  const std::string kind = geo["kind"];
  BoundaryKind bc = MixedBC{1.0};
  if (kind == "single") bc = MixedBC{geo["h0"].get<double>()};
  if (kind == "halfline") bc = MixedBC{geo["L"].get<double>() > 0.0 ? geo["L"].get<double>() : 1.0};
  if (kind == "double") bc = DirichletBC{geo["g0"].get<double>(), geo["h0"].get<double>()};
  if (kind == "fixed") {
    bc = geo["bc"] == "mixed" ? BoundaryKind{MixedBC{geo["l"].get<double>()}}
                              : BoundaryKind{DirichletBC{geo["l1"].get<double>(), geo["l2"].get<double>()}};
  }
  Json out;
  out["coefficient_kind"] = to_string(c.kind());
  out["boundary"] = std::holds_alternative<MixedBC>(bc) ? "mixed" : "dirichlet";
  out["interval_length"] = interval_length(bc);
  out["lambda_min"] = number(lambda_min(c, bc, o));
  out["lambda_max"] = number(lambda_max(c, bc, o));
  out["l_star"] = number(find_l_star(c, tol, o));
  out["l_star_star"] = number(find_l_star_star(c, tol, o));
  out["l_star_upper_bound"] = number(l_star_upper_bound(c));
  out["grid_n"] = o.grid_n;
  out["horizon"] = number(o.horizon);
  if (c.kind() == CoefficientKind::Constant) {
    const double a = c.bounds().a_inf, L = interval_length(bc);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    out["closed_form_lambda"] = std::holds_alternative<MixedBC>(bc) ? a - pi2 / (4 * L * L) : a - pi2 / (L * L);
    out["closed_form_l_star"] = std::numbers::pi / (2 * std::sqrt(a));
    out["closed_form_l_star_star"] = std::numbers::pi / std::sqrt(a);
  }
  return out;
}

SweepSpec sweep_from(const Json& config) {
  SweepSpec spec;
  spec.base = config;
  for (const Json& axis : config.at("sweep").at("axes")) {
    SweepAxis a;
    a.path = axis.at("path");
    if (!has_path(config, a.path)) throw ConfigError("sweep axis path '" + a.path + "' does not name a config field");
    for (const Json& v : axis.at("values")) a.values.push_back(v);
    spec.axes.push_back(std::move(a));
  }
  if (spec.axes.empty()) throw ConfigError("sweep.axes is empty");
  return spec;
}

SweepSummary run_sweep(const SweepSpec& spec) {
  SweepSummary summary;
  summary.digest = config_digest(spec.base);
  for (const SweepAxis& a : spec.axes) {
    if (!has_path(spec.base, a.path)) throw ConfigError("sweep axis path '" + a.path + "' does not name a config field");
    if (a.values.empty()) throw ConfigError("sweep axis '" + a.path + "' has no values");
    summary.axis_paths.push_back(a.path);
  }
  std::size_t total = 1;
  for (const SweepAxis& a : spec.axes) total *= a.values.size();

  // Build every cell config up front so that bad values fail before any run.
  std::vector<Json> configs(total);
  summary.cells.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    SweepCell& cell = summary.cells[i];
    cell.index = i;
    Json cfg = spec.base;
    cfg["sweep"]["axes"] = Json::array();
    std::size_t rem = i;
    std::vector<Json> values(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& vals = spec.axes[k].values;
      values[k] = vals[rem % vals.size()];
      rem /= vals.size();
    }
    for (std::size_t k = 0; k < spec.axes.size(); ++k) set_path(cfg, spec.axes[k].path, values[k]);
    cell.values = std::move(values);
    cell.digest = config_digest(cfg);
    configs[i] = std::move(cfg);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      SweepCell& cell = summary.cells[i];
      try {
        RunReport rep = execute(configs[i]);
        cell.status = "ok";
        cell.verdict = rep.verdict;
        cell.h_infinity = rep.outcome.h_infinity_estimate;
        cell.final_sup_u = rep.outcome.final_sup_u;
        cell.final_h = rep.series.back().h;
        cell.final_t = rep.series.back().t;
        cell.series = std::move(rep.series);
      } catch (...) {
        cell.status = error_class(std::current_exception(), cell.message);
        cell.verdict = "Error";
        cell.h_infinity = std::numeric_limits<double>::quiet_NaN();
        cell.final_h = cell.final_sup_u = cell.final_t = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return summary;
}

std::string SweepSummary::csv() const {
  std::ostringstream os;
  os << "index";
  for (const std::string& p : axis_paths) os << ',' << csv_field(p);
  os << ",digest,status,verdict,h_infinity,final_h,final_sup_u,final_t,message\n";
  for (const SweepCell& c : cells) {
    os << c.index;
    for (const Json& v : c.values) os << ',' << csv_field(value_text(v));
    os << ',' << c.digest << ',' << c.status << ',' << c.verdict << ',' << format_number(c.h_infinity) << ','
       << format_number(c.final_h) << ',' << format_number(c.final_sup_u) << ',' << format_number(c.final_t)
       << ',' << csv_field(c.message) << '\n';
  }
  return os.str();
}

Json SweepSummary::json() const {
  Json out;
  out["digest"] = digest;
  out["axes"] = axis_paths;
  Json cells_j = Json::array();
  std::map<std::string, int> counts;
  for (const SweepCell& c : cells) {
    ++counts[c.verdict];
    cells_j.push_back({{"index", c.index},
                       {"values", c.values},
                       {"digest", c.digest},
                       {"status", c.status},
                       {"verdict", c.verdict},
                       {"h_infinity", number(c.h_infinity)},
                       {"final_h", number(c.final_h)},
                       {"final_sup_u", number(c.final_sup_u)},
                       {"final_t", number(c.final_t)},
                       {"message", c.message}});
  }
  out["cells"] = cells_j;
  out["verdict_counts"] = counts;
  return out;
}

void write_sweep_outputs(const SweepSummary& summary, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "cells");
  write_text(fs::path(dir) / "phase_table.csv", summary.csv());
  write_text(fs::path(dir) / "summary.json", summary.json().dump(2) + "\n");
  for (const SweepCell& c : summary.cells) {
    if (c.status == "ok") write_csv((fs::path(dir) / "cells" / (c.digest.substr(0, 16) + ".csv")).string(), c.series);
  }
}

}  // namespace chemofront
