#include "chemofront/frontsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chemofront/errors.hpp"
#include "chemofront/spectrum.hpp"
#include "chemofront/transport.hpp"

namespace chemofront {
namespace {

TransportGeometry front_geometry(const FrontState& s, double h_prime) {
  TransportGeometry geo;
  geo.left = 0.0;
  geo.length = s.h;
  geo.left_velocity = 0.0;
  geo.right_velocity = h_prime;
  geo.left_dirichlet = false;
  geo.right_dirichlet = true;
  return geo;
}

void validate_state(const FrontState& s) {
  if (s.grid_n < 4 || s.u.size() != static_cast<std::size_t>(s.grid_n)) {
    throw ConfigError("front state: grid size mismatch");
  }
  if (!(s.h > 0.0) || !std::isfinite(s.h)) throw StabilityError("front state: h must be positive");
}

}  // namespace

FrontState make_initial_state(double h0, const InitialProfile& profile, int grid_n,
                              const ModelParams& p, double t0) {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw ConfigError("initial state requires h0 > 0");
  if (grid_n < 32) throw ConfigError("initial state requires grid_n >= 32");
  p.validate();
  FrontState s;
  s.t = t0;
  s.h = h0;
  s.grid_n = grid_n;
  s.u.resize(static_cast<std::size_t>(grid_n));
  const double dy = s.dy();
  for (int j = 0; j < grid_n; ++j) s.u[static_cast<std::size_t>(j)] = profile(j * dy);

  const double scale = std::max(1.0, sup_norm(s.u));
  for (double v : s.u) {
    if (!std::isfinite(v)) throw ConfigError("initial profile is not finite");
    if (v < 0.0) throw ConfigError("initial profile violates u0 >= 0");
  }
  if (std::abs(s.u.back()) > 1e-12 * scale) {
    std::ostringstream os;
    os << "initial profile violates u0(h0) = 0 (u0(h0) = " << s.u.back() << ")";
    throw ConfigError(os.str());
  }
  s.u.back() = 0.0;
  // One-sided second-order derivative at the symmetry axis, in physical units.
  const double slope = (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) / (2.0 * dy * h0);
  const double slope_tol = std::max(1e-8, 10.0 * dy * dy) * scale / h0;
  if (std::abs(slope) > slope_tol) {
    std::ostringstream os;
    os << "initial profile violates u0'(0) = 0 (discrete slope " << slope << ")";
    throw ConfigError(os.str());
  }
  PotentialPair pp = solve_potentials(s.u, p, h0);
  s.v1 = std::move(pp.v1);
  s.v2 = std::move(pp.v2);
  return s;
}

double stefan_velocity(const FrontState& s, double nu) {
  const std::size_t n = s.u.size();
  const double ux = (3.0 * s.u[n - 1] - 4.0 * s.u[n - 2] + s.u[n - 3]) / (2.0 * s.dy() * s.h);
  return -nu * ux;
}

double stable_dt(const FrontState& s, const ModelParams& p, const CoefficientField& c) {
  validate_state(s);
  PotentialPair pp = solve_potentials(s.u, p, s.h);
  TransportTerms terms{&c, &p, &pp.v1, &pp.v2, {}};
  double hp = stefan_velocity(s, p.nu);
  hp = hp > 0.0 ? hp : 0.0;
  return stable_step(s.u, s.t, front_geometry(s, hp), terms).limit();
}

FrontState step(const FrontState& s, double dt, const ModelParams& p, const CoefficientField& c,
                const StepOptions& opts) {
  validate_state(s);
  // (i) potentials on the current geometry
  PotentialPair pp = solve_potentials(s.u, p, s.h);
  // (ii) Stefan law
  double hp = stefan_velocity(s, p.nu);
  if (hp < -opts.front_tolerance) {
    std::ostringstream os;
    os << "front collapse: h' = " << hp << " at t = " << s.t;
    throw StabilityError(os.str());
  }
  hp = hp > 0.0 ? hp : 0.0;
  // (iii) IMEX update of u
  TransportGeometry geo = front_geometry(s, hp);
  TransportTerms terms{&c, &p, &pp.v1, &pp.v2, {}};
  const double budget = stable_step(s.u, s.t, geo, terms).limit();
  if (dt > budget * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "stability violation: dt = " << dt << " exceeds the step budget " << budget;
    throw StabilityError(os.str());
  }
  FrontState next;
  next.u = imex_step(s.u, s.t, dt, geo, terms);
  next.grid_n = s.grid_n;
  next.t = s.t + dt;
  // (iv) front update
  next.h = s.h + dt * hp;
  if (!std::isfinite(next.h)) throw StabilityError("front position became non-finite");
  PotentialPair fresh = solve_potentials(next.u, p, next.h);
  next.v1 = std::move(fresh.v1);
  next.v2 = std::move(fresh.v2);
  return next;
}

double window_infimum(const FrontState& s, double probe_length) {
  double inf = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.grid_n; ++j) {
    if (s.x(j) > probe_length + 1e-12) break;
    inf = std::min(inf, s.u[static_cast<std::size_t>(j)]);
  }
  return std::isfinite(inf) ? inf : s.u.front();
}

FrontRunResult run(const FrontRunConfig& cfg) {
  cfg.params.validate();
  if (!(cfg.t_end > cfg.t0)) throw ConfigError("run requires t_end > t0");
  if (!(cfg.dt_max > 0.0)) throw ConfigError("run requires dt_max > 0");
  if (!(cfg.sample_interval > 0.0)) throw ConfigError("run requires sample_interval > 0");

  const ModelParams& p = cfg.params;
  const CoefficientField& c = cfg.coefficients;
  FrontRunResult out;
  out.hypotheses = check_hypotheses(p, c);
  const HypothesisReport& hyp = out.hypotheses;
  if (!hyp.h1_holds && !cfg.allow_h1_violation) {
    std::ostringstream os;
    os << "(H1) fails (margin " << hyp.h1_margin << "); pass the override flag to run anyway";
    throw HypothesisViolation(os.str());
  }
  out.l_star = cfg.l_star > 0.0 ? cfg.l_star : find_l_star(c, 1e-6);
  out.h_max = cfg.h_max > 0.0 ? cfg.h_max : 50.0 * out.l_star;
  out.probe_length = cfg.probe_length > 0.0 ? cfg.probe_length : out.l_star;

  FrontState state = make_initial_state(cfg.h0, cfg.initial, cfg.grid_n, p, cfg.t0);
  RunDiagnostics& diag = out.diagnostics;
  diag.h1_holds = hyp.h1_holds;
  const double u0_sup = sup_norm(state.u);
  diag.uniform_bound = hyp.h1_holds ? std::max(u0_sup, hyp.M0) : std::numeric_limits<double>::infinity();
  diag.max_sup_u = u0_sup;

  auto make_sample = [&](const FrontState& s) {
    Sample smp;
    smp.t = s.t;
    smp.h = s.h;
    const double hp = stefan_velocity(s, p.nu);
    smp.h_prime = hp > 0.0 ? hp : 0.0;
    smp.sup_u = sup_norm(s.u);
    smp.inf_u_window = window_infimum(s, out.probe_length);
    PotentialPair pp{s.v1, s.v2, s.grid_n, s.h};
    smp.combo_residual = check_combo_bound(pp, s.u, p, hyp.M).residual;
    smp.gradient_residual = check_gradient_bound(pp, s.u, p).residual;
    return smp;
  };
  auto fail = [&](const std::string& what, const FrontState& s) {
    std::ostringstream os;
    os << what << " at t = " << s.t << " (h = " << s.h << ", sup_u = " << sup_norm(s.u) << ")";
    throw AssertionFailure(os.str());
  };

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
    double dt = std::min({cfg.dt_max, stable_dt(state, p, c), cfg.t_end - state.t});
    if (!(dt > 1e-14)) throw StabilityError("step budget collapsed to zero");
    // Land exactly on snapshot times.
    if (snapshot_index < snapshot_times.size() && state.t + dt > snapshot_times[snapshot_index]) {
      dt = std::max(snapshot_times[snapshot_index] - state.t, 1e-14);
    }
    const double prev_sup = sup_norm(state.u);
    FrontState next = step(state, dt, p, c, cfg.step);
    ++diag.steps;

    const double sup = sup_norm(next.u);
    PotentialPair pp{next.v1, next.v2, next.grid_n, next.h};
    const BoundDiagnostic combo = check_combo_bound(pp, next.u, p, hyp.M);
    const BoundDiagnostic grad = check_gradient_bound(pp, next.u, p);
    const double hp = (next.h - state.h) / dt;
    diag.max_sup_u = std::max(diag.max_sup_u, sup);
    diag.max_combo_residual = std::max(diag.max_combo_residual, combo.residual);
    diag.max_gradient_residual = std::max(diag.max_gradient_residual, grad.residual);
    diag.max_h_prime = std::max(diag.max_h_prime, hp);
    diag.min_h_prime = std::min(diag.min_h_prime, hp);
    if (hyp.h1_holds && prev_sup > hyp.M0) {
      diag.max_sup_increase_above_M0 = std::max(diag.max_sup_increase_above_M0, sup - prev_sup);
    }
    if (!hyp.h1_holds && sup > cfg.blowup_guard) {
      std::ostringstream os;
      os << "blow-up guard: sup_u = " << sup << " exceeds " << cfg.blowup_guard << " at t = " << next.t;
      throw StabilityError(os.str());
    }
    if (cfg.enforce_bounds) {
      if (next.h < state.h) fail("front moved backwards", next);
      if (hyp.h1_holds && sup > diag.uniform_bound + cfg.bound_tolerance) {
        fail("uniform bound sup_u <= max(||u0||, M0) violated", next);
      }
      if (hyp.h1_holds && prev_sup > hyp.M0 && sup > prev_sup + cfg.monotone_tolerance) {
        fail("sup_u increased while above M0", next);
      }
      if (combo.violated) fail("combination bound violated (residual " + format_number(combo.residual) + ")", next);
      if (grad.violated) fail("gradient bound violated (residual " + format_number(grad.residual) + ")", next);
    }
    state = std::move(next);
    if (cfg.observer) cfg.observer(state);

    while (snapshot_index < snapshot_times.size() &&
           snapshot_times[snapshot_index] <= state.t + 1e-12) {
      out.snapshots.push_back(state);
      ++snapshot_index;
    }
    out.reached_cap = state.h >= out.h_max;
    const double next_sample_t = cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval;
    const bool at_end = state.t >= cfg.t_end - eps_t || out.reached_cap;
    if (state.t >= next_sample_t - eps_t || at_end) {
      out.series.push(make_sample(state));
      while (cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval <= state.t + eps_t) {
        ++sample_index;
      }
      if (cfg.stop_when && cfg.stop_when(out.series)) stop = true;
    }
    if (out.reached_cap) stop = true;
  }
  out.final_state = std::move(state);
  return out;
}

}  // namespace chemofront
