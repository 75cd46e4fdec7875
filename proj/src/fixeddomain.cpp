#include "chemofront/fixeddomain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chemofront/elliptic.hpp"
#include "chemofront/errors.hpp"
#include "chemofront/spectrum.hpp"

namespace chemofront {
namespace {

double infimum_up_to(const std::vector<double>& u, double dx, double x_max) {
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (static_cast<double>(j) * dx > x_max + 1e-12) break;
    inf = std::min(inf, u[j]);
  }
  return inf;
}

void check_run_times(double t0, double t_end, double dt_max, double sample_interval) {
  if (!(t_end > t0)) throw ConfigError("run requires t_end > t0");
  if (!(dt_max > 0.0)) throw ConfigError("run requires dt_max > 0");
  if (!(sample_interval > 0.0)) throw ConfigError("run requires sample_interval > 0");
}

// Shared time loop for the scalar fixed-interval problems.
FixedRunResult evolve_scalar(const DriftField& beta, const CoefficientField& c,
                             const TransportGeometry& geo, const std::vector<double>& u0,
                             double exponent, const FixedRunConfig& cfg) {
  check_run_times(cfg.t0, cfg.t_end, cfg.dt_max, cfg.sample_interval);
  if (u0.size() < 4) throw ConfigError("fixed-domain run needs at least 4 nodes");
  for (double v : u0) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("initial data must be finite and >= 0");
  }
  const double scale = std::max(1.0, sup_norm(u0));
  std::vector<double> u = u0;
  if (geo.left_dirichlet) {
    if (std::abs(u.front()) > 1e-12 * scale) throw ConfigError("initial data must vanish at the left end");
    u.front() = 0.0;
  }
  if (geo.right_dirichlet) {
    if (std::abs(u.back()) > 1e-12 * scale) throw ConfigError("initial data must vanish at the right end");
    u.back() = 0.0;
  }

  FixedRunResult out;
  const std::size_t n = u.size();
  const double dx = geo.length / static_cast<double>(n - 1);
  out.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.x[j] = geo.left + static_cast<double>(j) * dx;
  out.principal_exponent = exponent;
  TransportTerms terms{&c, nullptr, nullptr, nullptr, beta};

  auto track_beta = [&](double t) {
    if (!beta) return;
    for (double x : out.x) out.beta_sup = std::max(out.beta_sup, std::abs(beta(t, x)));
  };
  auto sample = [&](double t) {
    Sample s;
    s.t = t;
    s.h = geo.length;
    s.h_prime = 0.0;
    s.sup_u = sup_norm(u);
    s.inf_u_window = *std::min_element(u.begin(), u.end());
    s.combo_residual = 0.0;
    s.gradient_residual = 0.0;
    out.series.push(s);
  };

  const double transient = cfg.transient >= 0.0 ? cfg.transient : 0.5 * (cfg.t_end - cfg.t0);
  const double eps_t = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  double t = cfg.t0;
  track_beta(t);
  sample(t);
  out.min_sup_after_transient = std::numeric_limits<double>::infinity();
  long sample_index = 1;
  while (t < cfg.t_end - eps_t) {
    const double budget = stable_step(u, t, geo, terms).limit();
    const double dt = std::min({cfg.dt_max, budget, cfg.t_end - t});
    if (!(dt > 1e-14)) throw StabilityError("step budget collapsed to zero");
    u = imex_step(u, t, dt, geo, terms);
    t += dt;
    track_beta(t);
    if (t >= cfg.t0 + transient - eps_t) {
      out.min_sup_after_transient = std::min(out.min_sup_after_transient, sup_norm(u));
    }
    if (t >= cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval - eps_t ||
        t >= cfg.t_end - eps_t) {
      sample(t);
      while (cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval <= t + eps_t) ++sample_index;
    }
  }
  out.t = t;
  out.u = u;
  const double final_sup = sup_norm(u);
  if (final_sup >= cfg.persist_floor) {
    out.verdict = FixedVerdict::Persists;
  } else if (final_sup < cfg.decay_threshold) {
    out.verdict = FixedVerdict::Decays;
  }
  const bool small_drift = out.beta_sup * out.beta_sup / 4.0 < 0.5 * exponent;
  if (cfg.assert_persistence && exponent > 0.0 && small_drift && sup_norm(u0) > 0.0 &&
      out.min_sup_after_transient < cfg.persist_floor) {
    std::ostringstream os;
    os << "persistence expected (principal exponent " << exponent << " > 0) but sup_u fell to "
       << out.min_sup_after_transient;
    throw AssertionFailure(os.str());
  }
  return out;
}

}  // namespace

const char* to_string(FixedVerdict v) {
  switch (v) {
    case FixedVerdict::Persists:
      return "Persists";
    case FixedVerdict::Decays:
      return "Decays";
    case FixedVerdict::Undetermined:
      return "Undetermined";
  }
  return "?";
}

HalfLineResult run_halfline(const HalfLineConfig& cfg) {
  cfg.params.validate();
  check_run_times(cfg.t0, cfg.t_end, cfg.dt_max, cfg.sample_interval);
  if (cfg.grid_n < 32) throw ConfigError("half-line run requires grid_n >= 32");
  if (!(cfg.boundary_layer_fraction >= 0.0 && cfg.boundary_layer_fraction < 1.0)) {
    throw ConfigError("boundary_layer_fraction must lie in [0, 1)");
  }
  const ModelParams& p = cfg.params;
  const CoefficientField& c = cfg.coefficients;
  HalfLineResult out;
  out.hypotheses = check_hypotheses(p, c);
  const HypothesisReport& hyp = out.hypotheses;
  if (!hyp.h1_holds && !cfg.allow_h1_violation) {
    std::ostringstream os;
    os << "(H1) fails (margin " << hyp.h1_margin << "); pass the override flag to run anyway";
    throw HypothesisViolation(os.str());
  }
  out.l_star = find_l_star(c, 1e-6);
  const double L = cfg.L > 0.0 ? cfg.L : 20.0 * out.l_star;
  if (L < 20.0 * out.l_star * (1.0 - 1e-9)) {
    std::ostringstream os;
    os << "half-line truncation L = " << L << " is below 20 l* = " << 20.0 * out.l_star;
    throw ConfigError(os.str());
  }
  const double probe = cfg.probe_length > 0.0 ? cfg.probe_length : out.l_star;

  HalfLineState state;
  state.t = cfg.t0;
  state.L = L;
  state.grid_n = cfg.grid_n;
  state.u.resize(static_cast<std::size_t>(cfg.grid_n));
  for (int j = 0; j < cfg.grid_n; ++j) {
    const double v = cfg.initial(static_cast<double>(j) / (cfg.grid_n - 1));
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("initial profile must be finite and >= 0");
    state.u[static_cast<std::size_t>(j)] = v;
  }
  const double u0_inf = *std::min_element(state.u.begin(), state.u.end());
  out.persistence_checked = hyp.h2_holds && hyp.M0_valid && u0_inf > 0.0;

  TransportGeometry geo;
  geo.left = 0.0;
  geo.length = L;
  geo.left_dirichlet = false;
  geo.right_dirichlet = false;

  auto solve = [&](HalfLineState& s) {
    PotentialPair pp = solve_potentials(s.u, p, s.L);
    s.v1 = std::move(pp.v1);
    s.v2 = std::move(pp.v2);
  };
  auto sample = [&](const HalfLineState& s) {
    Sample smp;
    smp.t = s.t;
    smp.h = s.L;
    smp.h_prime = 0.0;
    smp.sup_u = sup_norm(s.u);
    smp.inf_u_window = infimum_up_to(s.u, s.dx(), probe);
    PotentialPair pp{s.v1, s.v2, s.grid_n, s.L};
    smp.combo_residual = check_combo_bound(pp, s.u, p, hyp.M).residual;
    smp.gradient_residual = check_gradient_bound(pp, s.u, p).residual;
    out.series.push(smp);
  };
  solve(state);
  sample(state);

  std::vector<double> snapshot_times = cfg.snapshot_times;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  std::size_t snapshot_index = 0;
  while (snapshot_index < snapshot_times.size() && snapshot_times[snapshot_index] <= state.t) {
    out.snapshots.push_back(state);
    ++snapshot_index;
  }

  const double transient = cfg.transient >= 0.0 ? cfg.transient : 0.5 * (cfg.t_end - cfg.t0);
  const double x_interior = (1.0 - cfg.boundary_layer_fraction) * L;
  const double lower = hyp.M0_valid ? hyp.m0 - cfg.persistence_tolerance : 0.0;
  const double upper = hyp.M0_valid ? hyp.M0 + 1.0 + cfg.persistence_tolerance : 0.0;
  out.interior_min = std::numeric_limits<double>::infinity();
  out.interior_max = -std::numeric_limits<double>::infinity();
  const double eps_t = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  long sample_index = 1;
  while (state.t < cfg.t_end - eps_t) {
    TransportTerms terms{&c, &p, &state.v1, &state.v2, {}};
    double dt = std::min({cfg.dt_max, stable_step(state.u, state.t, geo, terms).limit(), cfg.t_end - state.t});
    if (snapshot_index < snapshot_times.size() && state.t + dt > snapshot_times[snapshot_index]) {
      dt = std::max(snapshot_times[snapshot_index] - state.t, 1e-14);
    }
    if (!(dt > 1e-14)) throw StabilityError("step budget collapsed to zero");
    state.u = imex_step(state.u, state.t, dt, geo, terms);
    state.t += dt;
    solve(state);
    const double sup = sup_norm(state.u);
    if (!hyp.h1_holds && sup > cfg.blowup_guard) {
      std::ostringstream os;
      os << "blow-up guard: sup_u = " << sup << " exceeds " << cfg.blowup_guard << " at t = " << state.t;
      throw StabilityError(os.str());
    }
    if (state.t >= cfg.t0 + transient - eps_t) {
      for (int j = 0; j < state.grid_n && state.x(j) <= x_interior + 1e-12; ++j) {
        const double v = state.u[static_cast<std::size_t>(j)];
        out.interior_min = std::min(out.interior_min, v);
        out.interior_max = std::max(out.interior_max, v);
      }
      if (out.persistence_checked && (out.interior_min < lower || out.interior_max > upper)) {
        std::ostringstream os;
        os << "persistence bounds [" << lower << ", " << upper << "] violated at t = " << state.t
           << " (interior range [" << out.interior_min << ", " << out.interior_max << "])";
        throw AssertionFailure(os.str());
      }
    }
    while (snapshot_index < snapshot_times.size() &&
           snapshot_times[snapshot_index] <= state.t + 1e-12) {
      out.snapshots.push_back(state);
      ++snapshot_index;
    }
    if (state.t >= cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval - eps_t ||
        state.t >= cfg.t_end - eps_t) {
      sample(state);
      while (cfg.t0 + static_cast<double>(sample_index) * cfg.sample_interval <= state.t + eps_t) ++sample_index;
    }
  }
  out.final_state = std::move(state);
  return out;
}

FixedRunResult run_fixed_mixed(const DriftField& beta, const CoefficientField& c, double l,
                               const std::vector<double>& u0, const FixedRunConfig& cfg) {
  if (!(l > 0.0)) throw ConfigError("run_fixed_mixed requires l > 0");
  TransportGeometry geo;
  geo.left = 0.0;
  geo.length = l;
  geo.left_dirichlet = false;
  geo.right_dirichlet = true;
  const double exponent = principal_eigenvalue_extrapolated(
      [&](double) { return c.bounds().a_inf; }, MixedBC{l}, 256);
  return evolve_scalar(beta, c, geo, u0, exponent, cfg);
}

FixedRunResult run_fixed_dirichlet(const DriftField& beta, double a0, double b0, double l1, double l2,
                                   const std::vector<double>& u0, const FixedRunConfig& cfg) {
  if (!(l2 > l1)) throw ConfigError("run_fixed_dirichlet requires l1 < l2");
  if (!(a0 > 0.0) || !(b0 > 0.0)) throw ConfigError("run_fixed_dirichlet requires a0, b0 > 0");
  TransportGeometry geo;
  geo.left = l1;
  geo.length = l2 - l1;
  geo.left_dirichlet = true;
  geo.right_dirichlet = true;
  const CoefficientField c = CoefficientField::constant(a0, b0);
  const double exponent = principal_eigenvalue_extrapolated([&](double) { return a0; },
                                                            DirichletBC{l1, l2}, 256);
  return evolve_scalar(beta, c, geo, u0, exponent, cfg);
}

// ---------------------------------------------------------------------------
// logistic ODE

namespace {

constexpr int kOrbitSteps = 4000;

double rk4_period(const Sampler& a, const Sampler& b, double t0, double period, double u,
                  std::vector<double>* values, std::vector<double>* derivs) {
  const double h = period / kOrbitSteps;
  auto f = [&](double t, double v) { return v * (a(t, 0.0) - b(t, 0.0) * v); };
  if (values) {
    values->assign(1, u);
    derivs->assign(1, f(t0, u));
  }
  for (int k = 0; k < kOrbitSteps; ++k) {
    const double t = t0 + k * h;
    const double k1 = f(t, u);
    const double k2 = f(t + 0.5 * h, u + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, u + 0.5 * h * k2);
    const double k4 = f(t + h, u + h * k3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (values) {
      values->push_back(u);
      derivs->push_back(f(t + h, u));
    }
  }
  return u;
}

}  // namespace

LogisticOrbit logistic_entire_solution(const Sampler& a, const Sampler& b, double period) {
  if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("logistic orbit requires a positive period");
  if (a.depends_on_space() || b.depends_on_space()) {
    throw ConfigError("logistic orbit requires time-only coefficients");
  }
  LogisticOrbit orbit;
  orbit.period_ = period;
  if (a.constant_value() && b.constant_value()) {
    if (!(*a.constant_value() > 0.0) || !(*b.constant_value() > 0.0)) {
      throw ConfigError("logistic orbit requires a, b > 0");
    }
    orbit.constant_ = true;
    orbit.values_ = {*a.constant_value() / *b.constant_value()};
    orbit.derivatives_ = {0.0};
    return orbit;
  }
  double a_inf = std::numeric_limits<double>::infinity();
  double b_inf = std::numeric_limits<double>::infinity();
  double b_sup = 0.0;
  for (int k = 0; k < 4096; ++k) {
    const double t = period * k / 4096.0;
    a_inf = std::min(a_inf, a(t, 0.0));
    b_inf = std::min(b_inf, b(t, 0.0));
    b_sup = std::max(b_sup, b(t, 0.0));
  }
  if (!(a_inf > 0.0) || !(b_inf > 0.0)) throw ConfigError("logistic orbit requires inf a, inf b > 0");

  constexpr double theta = 0.9;
  double u = a_inf / b_sup;
  for (int it = 1; it <= 10000; ++it) {
    const double next = u + theta * (rk4_period(a, b, 0.0, period, u, nullptr, nullptr) - u);
    if (!std::isfinite(next) || next <= 0.0) throw NumericalError("logistic period map left (0, inf)");
    const double change = std::abs(next - u);
    u = next;
    if (change < 1e-10) {
      orbit.iterations_ = it;
      rk4_period(a, b, 0.0, period, u, &orbit.values_, &orbit.derivatives_);
      orbit.values_.back() = orbit.values_.front();
      return orbit;
    }
  }
  throw NumericalError("logistic period map did not converge");
}

double LogisticOrbit::value(double t) const {
  if (constant_) return values_.front();
  double tau = std::fmod(t - t_start_, period_);
  if (tau < 0.0) tau += period_;
  const double h = period_ / kOrbitSteps;
  int k = std::min(static_cast<int>(tau / h), kOrbitSteps - 1);
  const double s = (tau - k * h) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * values_[k] + (s3 - 2 * s2 + s) * h * derivatives_[k] +
         (-2 * s3 + 3 * s2) * values_[k + 1] + (s3 - s2) * h * derivatives_[k + 1];
}

double LogisticOrbit::derivative(double t) const {
  if (constant_) return 0.0;
  double tau = std::fmod(t - t_start_, period_);
  if (tau < 0.0) tau += period_;
  const double h = period_ / kOrbitSteps;
  int k = std::min(static_cast<int>(tau / h), kOrbitSteps - 1);
  const double s = (tau - k * h) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * values_[k] + (-6 * s2 + 6 * s) * values_[k + 1]) / h +
         (3 * s2 - 4 * s + 1) * derivatives_[k] + (3 * s2 - 2 * s) * derivatives_[k + 1];
}

Sampler LogisticOrbit::sampler() const {
  LogisticOrbit copy = *this;
  if (constant_) return Sampler::constant(values_.front());
  return Sampler::custom([copy](double t, double) { return copy.value(t); }, true, false, period_,
                         "logistic orbit");
}

}  // namespace chemofront
