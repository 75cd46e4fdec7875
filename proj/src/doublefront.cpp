#include "chemofront/doublefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chemofront/errors.hpp"
#include "chemofront/spectrum.hpp"
#include "chemofront/transport.hpp"

namespace chemofront {
namespace {

TransportGeometry double_geometry(const DoubleFrontState& s, const FrontVelocities& v) {
  TransportGeometry geo;
  geo.left = s.g;
  geo.length = s.width();
  geo.left_velocity = v.g_prime;
  geo.right_velocity = v.h_prime;
  geo.left_dirichlet = true;
  geo.right_dirichlet = true;
  return geo;
}

void validate_state(const DoubleFrontState& s) {
  if (s.grid_n < 4 || s.u.size() != static_cast<std::size_t>(s.grid_n)) {
    throw ConfigError("double-front state: grid size mismatch");
  }
  if (!(s.h > s.g) || !std::isfinite(s.g) || !std::isfinite(s.h)) {
    throw StabilityError("double-front collapse: g >= h");
  }
}

FrontVelocities clamped_velocities(const DoubleFrontState& s, double nu, double tol) {
  FrontVelocities v = front_velocities(s, nu);
  if (v.h_prime < -tol || v.g_prime > tol) {
    std::ostringstream os;
    os << "front collapse: g' = " << v.g_prime << ", h' = " << v.h_prime << " at t = " << s.t;
    throw StabilityError(os.str());
  }
  v.h_prime = v.h_prime > 0.0 ? v.h_prime : 0.0;
  v.g_prime = v.g_prime < 0.0 ? v.g_prime : 0.0;
  return v;
}

double symmetry_error(const DoubleFrontState& s, double center) {
  double err = std::abs((center - s.g) - (s.h - center));
  const std::size_t n = s.u.size();
  for (std::size_t j = 0; j < n / 2; ++j) err = std::max(err, std::abs(s.u[j] - s.u[n - 1 - j]));
  return err;
}

}  // namespace

DoubleFrontState make_double_initial_state(double g0, double h0, const InitialProfile& profile,
                                           int grid_n, const ModelParams& p, double t0) {
  if (!(h0 > g0) || !std::isfinite(g0) || !std::isfinite(h0)) {
    throw ConfigError("double-front initial state requires g0 < h0");
  }
  if (grid_n < 32) throw ConfigError("double-front initial state requires grid_n >= 32");
  p.validate();
  DoubleFrontState s;
  s.t = t0;
  s.g = g0;
  s.h = h0;
  s.grid_n = grid_n;
  s.u.resize(static_cast<std::size_t>(grid_n));
  const double dy = s.dy();
  for (int j = 0; j < grid_n; ++j) s.u[static_cast<std::size_t>(j)] = profile(-1.0 + 2.0 * j * dy);
  const double scale = std::max(1.0, sup_norm(s.u));
  for (double v : s.u) {
    if (!std::isfinite(v)) throw ConfigError("initial profile is not finite");
    if (v < 0.0) throw ConfigError("initial profile violates u0 >= 0");
  }
  if (std::abs(s.u.front()) > 1e-12 * scale || std::abs(s.u.back()) > 1e-12 * scale) {
    throw ConfigError("initial profile violates u0(g0) = u0(h0) = 0");
  }
  s.u.front() = 0.0;
  s.u.back() = 0.0;
  PotentialPair pp = solve_potentials(s.u, p, s.width());
  s.v1 = std::move(pp.v1);
  s.v2 = std::move(pp.v2);
  return s;
}

FrontVelocities front_velocities(const DoubleFrontState& s, double nu) {
  const std::size_t n = s.u.size();
  const double denom = 2.0 * s.dy() * s.width();
  FrontVelocities v;
  v.h_prime = -nu * (3.0 * s.u[n - 1] - 4.0 * s.u[n - 2] + s.u[n - 3]) / denom;
  v.g_prime = -nu * (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) / denom;
  return v;
}

double stable_dt_double(const DoubleFrontState& s, const ModelParams& p, const CoefficientField& c) {
  validate_state(s);
  PotentialPair pp = solve_potentials(s.u, p, s.width());
  TransportTerms terms{&c, &p, &pp.v1, &pp.v2, {}};
  FrontVelocities v = front_velocities(s, p.nu);
  v.h_prime = v.h_prime > 0.0 ? v.h_prime : 0.0;
  v.g_prime = v.g_prime < 0.0 ? v.g_prime : 0.0;
  return stable_step(s.u, s.t, double_geometry(s, v), terms).limit();
}

DoubleFrontState step_double(const DoubleFrontState& s, double dt, const ModelParams& p,
                             const CoefficientField& c, const StepOptions& opts) {
  validate_state(s);
  PotentialPair pp = solve_potentials(s.u, p, s.width());
  const FrontVelocities v = clamped_velocities(s, p.nu, opts.front_tolerance);
  const TransportGeometry geo = double_geometry(s, v);
  TransportTerms terms{&c, &p, &pp.v1, &pp.v2, {}};
  const double budget = stable_step(s.u, s.t, geo, terms).limit();
  if (dt > budget * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "stability violation: dt = " << dt << " exceeds the step budget " << budget;
    throw StabilityError(os.str());
  }
  DoubleFrontState next;
  next.u = imex_step(s.u, s.t, dt, geo, terms);
  next.grid_n = s.grid_n;
  next.t = s.t + dt;
  next.g = s.g + dt * v.g_prime;
  next.h = s.h + dt * v.h_prime;
  validate_state(next);
  PotentialPair fresh = solve_potentials(next.u, p, next.width());
  next.v1 = std::move(fresh.v1);
  next.v2 = std::move(fresh.v2);
  return next;
}

DoubleRunResult run_double(const DoubleRunConfig& cfg) {
  cfg.params.validate();
  if (!(cfg.t_end > cfg.t0)) throw ConfigError("run requires t_end > t0");
  if (!(cfg.dt_max > 0.0)) throw ConfigError("run requires dt_max > 0");
  if (!(cfg.sample_interval > 0.0)) throw ConfigError("run requires sample_interval > 0");
  const ModelParams& p = cfg.params;
  const CoefficientField& c = cfg.coefficients;

  DoubleRunResult out;
  out.hypotheses = check_hypotheses(p, c);
  const HypothesisReport& hyp = out.hypotheses;
  if (!hyp.h1_holds && !cfg.allow_h1_violation) {
    std::ostringstream os;
    os << "(H1) fails (margin " << hyp.h1_margin << "); pass the override flag to run anyway";
    throw HypothesisViolation(os.str());
  }
  out.l_star_star = cfg.l_star_star > 0.0 ? cfg.l_star_star : find_l_star_star(c, 1e-6);
  out.h_max = cfg.h_max > 0.0 ? cfg.h_max : 25.0 * out.l_star_star;
  out.center = 0.5 * (cfg.g0 + cfg.h0);
  out.probe_half_width = cfg.probe_half_width > 0.0 ? cfg.probe_half_width : 0.5 * out.l_star_star;
  ClassifyThresholds th = cfg.thresholds;
  th.h_max = out.h_max;
  th.center = out.center;
  th.validate();

  DoubleFrontState state = make_double_initial_state(cfg.g0, cfg.h0, cfg.initial, cfg.grid_n, p, cfg.t0);
  RunDiagnostics& diag = out.diagnostics;
  diag.h1_holds = hyp.h1_holds;
  const double u0_sup = sup_norm(state.u);
  diag.uniform_bound = hyp.h1_holds ? std::max(u0_sup, hyp.M0) : std::numeric_limits<double>::infinity();
  diag.max_sup_u = u0_sup;
  out.series.double_front = true;

  const double lo = out.center - out.probe_half_width;
  const double hi = out.center + out.probe_half_width;
  auto make_sample = [&](const DoubleFrontState& s) {
    const FrontVelocities v = front_velocities(s, p.nu);
    Sample smp;
    smp.t = s.t;
    smp.h = s.h;
    smp.g = s.g;
    smp.h_prime = v.h_prime > 0.0 ? v.h_prime : 0.0;
    smp.g_prime = v.g_prime < 0.0 ? v.g_prime : 0.0;
    smp.sup_u = sup_norm(s.u);
    double inf = std::numeric_limits<double>::infinity();
    for (int j = 0; j < s.grid_n; ++j) {
      const double x = s.x(j);
      if (x >= lo - 1e-12 && x <= hi + 1e-12) inf = std::min(inf, s.u[static_cast<std::size_t>(j)]);
    }
    // Window narrower than the domain's grid spacing or outside it: the domain is the window.
    smp.inf_u_window = std::isfinite(inf) ? inf : 0.0;
    PotentialPair pp{s.v1, s.v2, s.grid_n, s.width()};
    smp.combo_residual = check_combo_bound(pp, s.u, p, hyp.M).residual;
    smp.gradient_residual = check_gradient_bound(pp, s.u, p).residual;
    return smp;
  };
  auto fail = [&](const std::string& what, const DoubleFrontState& s) {
    std::ostringstream os;
    os << what << " at t = " << s.t << " (g = " << s.g << ", h = " << s.h
       << ", sup_u = " << sup_norm(s.u) << ")";
    throw AssertionFailure(os.str());
  };

  if (cfg.check_symmetry) {
    out.max_symmetry_error = symmetry_error(state, out.center);
    if (out.max_symmetry_error > cfg.symmetry_tolerance) fail("initial data is not symmetric", state);
  }
  out.series.push(make_sample(state));
  long sample_index = 1;
  std::size_t snapshot_index = 0;
  std::vector<double> snapshot_times = cfg.snapshot_times;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  while (snapshot_index < snapshot_times.size() && snapshot_times[snapshot_index] <= state.t) {
    out.snapshots.push_back(state);
    ++snapshot_index;
  }

  const double eps_t = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  bool stop = false;
  while (!stop && state.t < cfg.t_end - eps_t) {
    double dt = std::min({cfg.dt_max, stable_dt_double(state, p, c), cfg.t_end - state.t});
    if (!(dt > 1e-14)) throw StabilityError("step budget collapsed to zero");
    if (snapshot_index < snapshot_times.size() && state.t + dt > snapshot_times[snapshot_index]) {
      dt = std::max(snapshot_times[snapshot_index] - state.t, 1e-14);
    }
    const double prev_sup = sup_norm(state.u);
    DoubleFrontState next = step_double(state, dt, p, c, cfg.step);
    ++diag.steps;

    const double sup = sup_norm(next.u);
    PotentialPair pp{next.v1, next.v2, next.grid_n, next.width()};
    const BoundDiagnostic combo = check_combo_bound(pp, next.u, p, hyp.M);
    const BoundDiagnostic grad = check_gradient_bound(pp, next.u, p);
    diag.max_sup_u = std::max(diag.max_sup_u, sup);
    diag.max_combo_residual = std::max(diag.max_combo_residual, combo.residual);
    diag.max_gradient_residual = std::max(diag.max_gradient_residual, grad.residual);
    const double hp = (next.h - state.h) / dt;
    const double gp = (next.g - state.g) / dt;
    diag.max_h_prime = std::max({diag.max_h_prime, hp, -gp});
    diag.min_h_prime = std::min({diag.min_h_prime, hp, -gp});
    if (hyp.h1_holds && prev_sup > hyp.M0) {
      diag.max_sup_increase_above_M0 = std::max(diag.max_sup_increase_above_M0, sup - prev_sup);
    }
    if (!hyp.h1_holds && sup > cfg.blowup_guard) {
      std::ostringstream os;
      os << "blow-up guard: sup_u = " << sup << " exceeds " << cfg.blowup_guard << " at t = " << next.t;
      throw StabilityError(os.str());
    }
    if (cfg.enforce_bounds) {
      if (next.h < state.h || next.g > state.g) fail("front moved backwards", next);
      if (hyp.h1_holds && sup > diag.uniform_bound + cfg.bound_tolerance) {
        fail("uniform bound sup_u <= max(||u0||, M0) violated", next);
      }
      if (hyp.h1_holds && prev_sup > hyp.M0 && sup > prev_sup + cfg.monotone_tolerance) {
        fail("sup_u increased while above M0", next);
      }
      if (combo.violated) fail("combination bound violated (residual " + format_number(combo.residual) + ")", next);
      if (grad.violated) fail("gradient bound violated (residual " + format_number(grad.residual) + ")", next);
    }
    if (cfg.check_symmetry) {
      const double err = symmetry_error(next, out.center);
      out.max_symmetry_error = std::max(out.max_symmetry_error, err);
      if (err > cfg.symmetry_tolerance) fail("symmetry lost (error " + format_number(err) + ")", next);
    }
    state = std::move(next);
    if (cfg.observer) cfg.observer(state);

    while (snapshot_index < snapshot_times.size() &&
           snapshot_times[snapshot_index] <= state.t + 1e-12) {
      out.snapshots.push_back(state);
      ++snapshot_index;
    }
    out.reached_cap = state.h - out.center >= out.h_max && out.center - state.g >= out.h_max;
    const double next_sample_t = cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval;
    const bool at_end = state.t >= cfg.t_end - eps_t || out.reached_cap;
    if (state.t >= next_sample_t - eps_t || at_end) {
      out.series.push(make_sample(state));
      while (cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval <= state.t + eps_t) {
        ++sample_index;
      }
      if (cfg.stop_on_verdict && classify(out.series, out.l_star_star, th).verdict != Verdict::Undetermined) {
        stop = true;
      }
    }
    if (out.reached_cap) stop = true;
  }

  out.outcome = classify(out.series, out.l_star_star, th);
  if (out.outcome.verdict == Verdict::Vanishing &&
      state.width() > out.l_star_star + cfg.vanishing_width_tolerance) {
    fail("vanishing with final width above l** + tolerance", state);
  }
  out.final_state = std::move(state);
  return out;
}

}  // namespace chemofront
