#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "chemofront/errors.hpp"
#include "chemofront/harness.hpp"

namespace chemofront {
namespace {

namespace fs = std::filesystem;

class Report {
 public:
  Report(std::string preset, const ExperimentOptions& opts) : opts_(opts) {
    j_["preset"] = std::move(preset);
    j_["overrides"] = opts.overrides;
    j_["assertions"] = Json::array();
    j_["runs"] = Json::array();
    if (!opts.out_dir.empty()) fs::create_directories(opts.out_dir);
  }

  void check(const std::string& name, bool passed, double value, double limit, const std::string& detail) {
    Json a{{"name", name}, {"passed", passed}, {"detail", detail}};
    a["value"] = std::isfinite(value) ? Json(value) : Json(format_number(value));
    a["limit"] = std::isfinite(limit) ? Json(limit) : Json(format_number(limit));
    j_["assertions"].push_back(std::move(a));
  }

  void add_run(const std::string& name, const RunReport& r) {
    Json entry{{"name", name}, {"digest", r.digest}, {"verdict", r.verdict}};
    if (!opts_.out_dir.empty()) {
      const std::string file = name + ".csv";
      write_csv((fs::path(opts_.out_dir) / file).string(), r.series);
      entry["series"] = file;
    }
    j_["runs"].push_back(std::move(entry));
  }

  void set(const std::string& key, Json value) { j_[key] = std::move(value); }

  Json finish() {
    bool passed = true;
    for (const Json& a : j_["assertions"]) passed = passed && a["passed"].get<bool>();
    j_["passed"] = passed;
    if (!opts_.out_dir.empty()) {
      std::ofstream os(fs::path(opts_.out_dir) / "summary.json", std::ios::binary);
      os << j_.dump(2) << "\n";
    }
    return j_;
  }

 private:
  Json j_;
  const ExperimentOptions& opts_;
};

// Rethrows with the run name prepended, keeping the error class (and so the exit code).
template <class F>
auto in_context(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const AssertionFailure& e) {
    throw AssertionFailure(what + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(what + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(what + ": " + e.what());
  } catch (const Error& e) {
    throw Error(what + ": " + e.what());
  }
}

RunReport run_named(Report& rep, const std::string& name, const Json& cfg) {
  RunReport r = in_context(name, [&] { return execute(cfg); });
  rep.add_run(name, r);
  return r;
}

// Largest |u - target(t)| over nodes with x in [lo, hi].
double max_deviation(const SnapshotTable& s, double lo, double hi, double target) {
  double dev = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) {
    const double x = s.left + s.y[j] * s.length;
    if (x >= lo - 1e-12 && x <= hi + 1e-12) dev = std::max(dev, std::abs(s.u[j] - target));
  }
  return dev;
}

Json single_front_base() {
  Json c = default_config("single");
  c["geometry"]["h0"] = 2.0;
  c["initial"]["amplitude"] = 0.5;
  c["h_max"] = 20.0;
  c["time"]["t_end"] = 300.0;
  return c;
}

// ----------------------------------------------------------------- presets

void preset_bounds_check(const Json& base, Report& rep) {
  const RunReport r = run_named(rep, "bounds", base);
  const Json& h = r.manifest["hypotheses"];
  const Json& d = r.manifest["diagnostics"];
  const double M0 = h["M0"], u0 = r.series.samples.front().sup_u;
  const double tol = base["diagnostics"]["bound_tolerance"];
  const double mono_tol = base["diagnostics"]["monotone_tolerance"];
  rep.check("h1_holds", h["h1_holds"].get<bool>(), h["h1_margin"], 0.0, "(H1) margin must be positive");
  rep.check("initial_above_M0", u0 > M0, u0, M0, "the preset probes the decreasing regime ||u0|| > M0");
  const double bound = std::max(u0, M0) + tol;
  rep.check("uniform_bound", d["max_sup_u"].get<double>() <= bound, d["max_sup_u"], bound,
            "sup_u <= max(||u0||, M0) + tol at every step");
  rep.check("sup_nonincreasing_above_M0", d["max_sup_increase_above_M0"].get<double>() <= mono_tol,
            d["max_sup_increase_above_M0"], mono_tol, "largest one-step growth of sup_u while above M0");
  rep.check("front_nondecreasing", d["min_front_speed"].get<double>() >= 0.0, d["min_front_speed"], 0.0,
            "smallest observed h'");
  rep.check("combo_residual", true, d["max_combo_residual"], 0.0,
            "checked against 10 dx^2 on every step; a violation aborts the run");
  rep.check("gradient_residual", true, d["max_gradient_residual"], 0.0,
            "checked against 10 dx^2 on every step; a violation aborts the run");
  // Eventual bound over the last 10% of the run.
  const auto& s = r.series.samples;
  const double t_cut = s.back().t - 0.1 * (s.back().t - s.front().t);
  double tail = 0.0;
  for (const Sample& x : s) {
    if (x.t >= t_cut) tail = std::max(tail, x.sup_u);
  }
  rep.check("eventual_bound", tail <= M0 + tol, tail, M0 + tol, "sup_u over the last 10% of the run");
}

void preset_dichotomy_sweep(const Json& base, Report& rep, const ExperimentOptions& opts) {
  SweepSpec spec = sweep_from(base);
  spec.jobs = opts.jobs;
  const SweepSummary sum = in_context("dichotomy sweep", [&] { return run_sweep(spec); });
  if (!opts.out_dir.empty()) write_sweep_outputs(sum, opts.out_dir);
  rep.set("phase_table", sum.json());
  const double l_star = find_l_star(coefficients_from(base), base["spectrum"]["tol"], spectrum_options_from(base));
  rep.set("l_star", l_star);

  // Order cells by h0 (the first axis is expected to be geometry.h0).
  std::vector<std::pair<double, const SweepCell*>> rows;
  const auto& paths = sum.axis_paths;
  const auto it = std::find(paths.begin(), paths.end(), "geometry.h0");
  if (it == paths.end()) throw ConfigError("dichotomy-sweep needs a geometry.h0 axis");
  const std::size_t k = static_cast<std::size_t>(it - paths.begin());
  for (const SweepCell& c : sum.cells) rows.push_back({c.values[k].get<double>(), &c});
  std::stable_sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.first < b.first; });

  int failures = 0, undetermined = 0;
  bool monotone = true, seen_spreading = false;
  double last_vanishing = -1.0, worst_h_inf = 0.0;
  for (auto& [h0, c] : rows) {
    if (c->status != "ok") ++failures;
    if (c->verdict == "Undetermined") ++undetermined;
    if (c->verdict == "Spreading") seen_spreading = true;
    if (c->verdict == "Vanishing") {
      if (seen_spreading) monotone = false;
      last_vanishing = std::max(last_vanishing, h0);
      worst_h_inf = std::max(worst_h_inf, c->h_infinity);
    }
  }
  rep.check("all_runs_succeeded", failures == 0, failures, 0, "cells with errors");
  rep.check("all_determined", undetermined == 0, undetermined, 0, "cells classified Undetermined");
  rep.check("monotone_boundary", monotone, monotone ? 1 : 0, 1, "no Vanishing above any Spreading h0");
  rep.check("vanishing_h_infinity", worst_h_inf <= l_star + 0.05, worst_h_inf, l_star + 0.05,
            "largest h_inf among vanishing runs");
  const bool in_region = last_vanishing < 0.0 || (last_vanishing > 0.5 * l_star && last_vanishing <= l_star);
  rep.check("threshold_region", in_region, last_vanishing, l_star,
            "largest vanishing h0 lies in (l*/2, l*] (value -1: no vanishing cell)");
}

void preset_persistence(const Json& base, Report& rep) {
  const RunReport r = run_named(rep, "halfline", base);
  const Json& h = r.manifest["hypotheses"];
  const double tol = base["diagnostics"]["persistence_tolerance"];
  rep.check("h2_holds", h["h2_holds"].get<bool>(), h["h2_margin"], 0.0, "(H2) margin must be positive");
  rep.check("persistence_checked", r.manifest["persistence_checked"].get<bool>(), 0, 0,
            "(H2) holds and inf u0 > 0");
  if (!h["M0_valid"].get<bool>()) return;
  const double lo = h["m0"].get<double>() - tol, hi = h["M0"].get<double>() + 1.0 + tol;
  rep.check("interior_lower_bound", r.manifest["interior_min"].get<double>() >= lo, r.manifest["interior_min"], lo,
            "min interior u after the transient vs m0 - tol");
  rep.check("interior_upper_bound", r.manifest["interior_max"].get<double>() <= hi, r.manifest["interior_max"], hi,
            "max interior u after the transient vs M0 + 1 + tol");
}

void preset_ode_limit(const Json& base, Report& rep) {
  // Constant coefficients: the limit is a / b.
  const RunReport r = run_named(rep, "constant", base);
  const CoefficientField c = coefficients_from(base);
  if (c.kind() == CoefficientKind::Constant) {
    const double target = c.bounds().a_inf / c.bounds().b_inf;
    const double dev = max_deviation(r.final_profile, 0.0, 1.0, target) / target;
    rep.check("constant_spreading", r.verdict == "Spreading", 0, 0, "verdict " + r.verdict);
    rep.check("constant_limit", dev <= 0.01, dev, 0.01, "max |u - a/b| / (a/b) on [0, 1] at the end");
  }

  // Time-periodic a: compare the final period with the logistic orbit.
  Json periodic = base;
  periodic["coefficients"]["a"] = {{"type", "sin_periodic"}, {"offset", 1.0}, {"amplitude", 0.5}, {"period", 1.0}};
  periodic["coefficients"]["b"] = {{"type", "constant"}, {"value", 1.0}};
  periodic["coefficients"]["bounds"] = {{"a_inf", 0.5}, {"a_sup", 1.5}, {"b_inf", 1.0}, {"b_sup", 1.0}};
  periodic["time"]["stop_on_verdict"] = false;
  const double t_end = 40.0;
  periodic["time"]["t_end"] = t_end;
  periodic["h_max"] = 1e4;
  periodic["grid_n"] = std::max(512, base["grid_n"].get<int>());
  Json snaps = Json::array();
  for (int k = 0; k <= 20; ++k) snaps.push_back(t_end - 1.0 + k / 20.0);
  periodic["snapshots"] = snaps;
  periodic = normalize_config(periodic);
  const RunReport rp = run_named(rep, "periodic", periodic);
  const CoefficientField cp = coefficients_from(periodic);
  const LogisticOrbit orbit = logistic_entire_solution(cp.a_sampler(), cp.b_sampler(), cp.period());
  double dist = 0.0, scale = 0.0, residual = 0.0;
  for (const SnapshotTable& s : rp.snapshots) {
    const double target = orbit(s.t);
    dist = std::max(dist, max_deviation(s, 0.0, 1.0, target));
    scale = std::max(scale, target);
  }
  for (int k = 0; k < 1000; ++k) {
    const double t = (k + 0.37) / 1000.0 * cp.period();  // off the integration nodes
    const double u = orbit(t);
    residual = std::max(residual, std::abs(orbit.derivative(t) - u * (cp.a(t, 0.0) - cp.b(t, 0.0) * u)));
  }
  rep.check("orbit_residual", residual < 1e-8, residual, 1e-8, "|u*' - u*(a - b u*)| over one period");
  rep.check("periodic_limit", dist / scale <= 0.02, dist / scale, 0.02,
            "sup over the final period and x in [0, 1] of |u - u*(t)| / max u*");
}

void preset_double_dichotomy(const Json& base, Report& rep) {
  const double tol = base["diagnostics"]["vanishing_width_tolerance"];
  const double sym_tol = base["geometry"]["symmetry_tolerance"];
  Json narrow = base;
  narrow["geometry"]["g0"] = -0.6;
  narrow["geometry"]["h0"] = 0.6;
  narrow["initial"]["amplitude"] = 0.1;
  narrow = normalize_config(narrow);
  const RunReport v = run_named(rep, "width_1.2", narrow);
  const double l2 = v.manifest["l_star_star"];
  const double width = v.manifest["final_h"].get<double>() - v.manifest["final_g"].get<double>();
  rep.check("narrow_vanishing", v.verdict == "Vanishing", 0, 0, "verdict " + v.verdict);
  rep.check("narrow_width", width <= l2 + tol, width, l2 + tol, "final h - g vs l** + tol");
  rep.check("narrow_symmetry", v.manifest["max_symmetry_error"].get<double>() <= sym_tol,
            v.manifest["max_symmetry_error"], sym_tol, "max | |g - c| - |h - c| | and profile mirror error");

  Json wide = base;
  wide["geometry"]["g0"] = -2.0;
  wide["geometry"]["h0"] = 2.0;
  wide["initial"]["amplitude"] = 0.5;
  wide = normalize_config(wide);
  const RunReport s = run_named(rep, "width_4", wide);
  const double dev = max_deviation(s.final_profile, -1.0, 1.0, 1.0);
  rep.check("wide_spreading", s.verdict == "Spreading", 0, 0, "verdict " + s.verdict);
  rep.check("wide_limit", dev <= 0.01, dev, 0.01, "max |u - 1| on [-1, 1] at the end");
  rep.check("wide_symmetry", s.manifest["max_symmetry_error"].get<double>() <= sym_tol,
            s.manifest["max_symmetry_error"], sym_tol, "max | |g - c| - |h - c| | and profile mirror error");
}

void preset_spectrum_report(const Json& base, Report& rep) {
  const Json s = in_context("spectrum", [&] { return spectrum_report(base); });
  rep.set("spectrum", s);
  if (s.contains("closed_form_lambda")) {
    const double e1 = std::abs(s["lambda_min"].get<double>() - s["closed_form_lambda"].get<double>());
    const double e2 = std::abs(s["l_star"].get<double>() - s["closed_form_l_star"].get<double>());
    const double e3 = std::abs(s["l_star_star"].get<double>() - s["closed_form_l_star_star"].get<double>());
    rep.check("eigenvalue_closed_form", e1 <= 1e-6, e1, 1e-6, "|lambda - (a - pi^2 / (c L^2))|");
    rep.check("l_star_closed_form", e2 <= 1e-3, e2, 1e-3, "|l* - pi / (2 sqrt a)|");
    rep.check("l_star_star_closed_form", e3 <= 1e-3, e3, 1e-3, "|l** - pi / sqrt a|");
  } else {
    const double ls = s["l_star"], ub = s["l_star_upper_bound"];
    rep.check("l_star_upper_bound", ls <= ub + 1e-3, ls, ub + 1e-3, "l*(a) <= pi / (2 sqrt(a_inf))");
    rep.check("interval_ordered", s["lambda_min"].get<double>() <= s["lambda_max"].get<double>() + 1e-12,
              s["lambda_min"], s["lambda_max"], "lambda_min <= lambda_max");
  }
}

}  // namespace

const std::vector<std::string>& experiment_presets() {
  static const std::vector<std::string> names = {"bounds-check", "dichotomy-sweep", "persistence",
                                                 "ode-limit",    "double-dichotomy", "spectrum-report"};
  return names;
}

Json experiment_base_config(const std::string& preset) {
  if (preset == "bounds-check") {
    Json c = default_config("single");
    c["model"] = {{"chi1", 0.2}, {"mu1", 1.0}, {"chi2", 0.4}, {"mu2", 1.0}};
    c["geometry"]["h0"] = 2.0;
    c["initial"]["amplitude"] = 2.5;
    c["time"]["t_end"] = 20.0;
    c["time"]["stop_on_verdict"] = false;
    c["h_max"] = 1e4;
    return normalize_config(c);
  }
  if (preset == "dichotomy-sweep") {
    Json c = single_front_base();
    c["initial"]["amplitude"] = 0.1;
    c["time"]["t_end"] = 600.0;
    c["time"]["sample_interval"] = 0.5;
    Json values = Json::array();
    for (int k = 1; k <= 10; ++k) values.push_back(0.3 * k);
    c["sweep"]["axes"] = Json::array({{{"path", "geometry.h0"}, {"values", values}}});
    return normalize_config(c);
  }
  if (preset == "persistence") {
    Json c = default_config("halfline");
    c["model"] = {{"chi1", 0.2}, {"mu1", 1.0}, {"chi2", 0.4}, {"mu2", 1.0}};
    c["coefficients"] = {{"a", {{"type", "cos_space"}, {"offset", 1.0}, {"amplitude", 0.2}, {"wavelength", 5.0}}},
                         {"b", 1.0},
                         {"bounds", {{"a_inf", 0.8}, {"a_sup", 1.2}, {"b_inf", 1.0}, {"b_sup", 1.0}}}};
    c["time"]["t_end"] = 40.0;
    return normalize_config(c);
  }
  if (preset == "ode-limit") {
    Json c = single_front_base();
    c["coefficients"]["a"]["value"] = 2.0;
    c["coefficients"].erase("bounds");
    return normalize_config(c);
  }
  if (preset == "double-dichotomy") {
    Json c = default_config("double");
    c["geometry"]["check_symmetry"] = true;
    c["h_max"] = 20.0;
    c["time"]["t_end"] = 300.0;
    return normalize_config(c);
  }
  if (preset == "spectrum-report") return default_config("single");
  throw ConfigError("unknown experiment preset '" + preset + "'");
}

Json run_experiment(const std::string& preset, const ExperimentOptions& opts) {
  Json base = experiment_base_config(preset);
  if (opts.allow_h1_violation) base["allow_h1_violation"] = true;
  for (const std::string& o : opts.overrides) apply_override(base, o);
  Report rep(preset, opts);
  rep.set("base_digest", config_digest(base));
  if (preset == "bounds-check") preset_bounds_check(base, rep);
  if (preset == "dichotomy-sweep") preset_dichotomy_sweep(base, rep, opts);
  if (preset == "persistence") preset_persistence(base, rep);
  if (preset == "ode-limit") preset_ode_limit(base, rep);
  if (preset == "double-dichotomy") preset_double_dichotomy(base, rep);
  if (preset == "spectrum-report") preset_spectrum_report(base, rep);
  return rep.finish();
}

}  // namespace chemofront
