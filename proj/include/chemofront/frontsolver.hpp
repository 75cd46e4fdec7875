#pragma once

#include <functional>
#include <vector>

#include "chemofront/elliptic.hpp"
#include "chemofront/model.hpp"
#include "chemofront/profile.hpp"
#include "chemofront/series.hpp"

namespace chemofront {

/// Front-fixed snapshot of the single free-boundary problem on y = x / h in [0, 1].
struct FrontState {
  double t = 0.0;
  double h = 1.0;
  std::vector<double> u;  // u.back() == 0 (front node)
  std::vector<double> v1;
  std::vector<double> v2;
  int grid_n = 0;

  double dy() const { return 1.0 / static_cast<double>(grid_n - 1); }
  double x(int j) const { return h * j * dy(); }
};

/// Samples amplitude profile s -> u0(s) on the y grid and checks u0 >= 0,
/// u0'(0) = 0 and u0(h0) = 0. Potentials are solved for the initial data.
FrontState make_initial_state(double h0, const InitialProfile& profile, int grid_n,
                              const ModelParams& p, double t0 = 0.0);

/// h' = -nu u_x(h) from the second-order one-sided stencil at the front.
double stefan_velocity(const FrontState& s, double nu);

struct StepOptions {
  double front_tolerance = 1e-9;  // h' below -tolerance is a front collapse
};

/// Largest admissible dt for the explicit terms at state `s`.
double stable_dt(const FrontState& s, const ModelParams& p, const CoefficientField& c);

/// One IMEX step of the straightened system followed by h <- h + dt h'.
FrontState step(const FrontState& s, double dt, const ModelParams& p, const CoefficientField& c,
                const StepOptions& opts = {});

/// Summary of the bound diagnostics gathered over every accepted step.
struct RunDiagnostics {
  long steps = 0;
  double max_sup_u = 0.0;
  double max_combo_residual = -1e300;
  double max_gradient_residual = -1e300;
  double max_h_prime = 0.0;
  double min_h_prime = 0.0;
  double max_sup_increase_above_M0 = 0.0;  // largest one-step growth of sup_u while sup_u > M0
  double uniform_bound = 0.0;              // max(||u0||, M0)
  bool h1_holds = false;
};

struct FrontRunConfig {
  ModelParams params;
  CoefficientField coefficients;
  double h0 = 1.0;
  InitialProfile initial = InitialProfile::cosine(1.0);
  int grid_n = 256;
  double t0 = 0.0;
  double t_end = 50.0;
  double dt_max = 0.01;
  double h_max = 0.0;           // 0: 50 l*
  double l_star = 0.0;          // 0: computed
  double probe_length = 0.0;    // 0: l*
  double sample_interval = 0.1;
  bool allow_h1_violation = false;
  double bound_tolerance = 1e-3;
  double monotone_tolerance = 1e-9;  // one-step sup_u growth tolerated while sup_u > M0
  double blowup_guard = 1e3;
  bool enforce_bounds = true;
  StepOptions step;
  std::vector<double> snapshot_times;
  /// Checked after each recorded sample; returning true ends the run.
  std::function<bool(const RunSeries&)> stop_when;
  /// Called after every accepted step.
  std::function<void(const FrontState&)> observer;
};

struct FrontRunResult {
  RunSeries series;
  FrontState final_state;
  std::vector<FrontState> snapshots;
  RunDiagnostics diagnostics;
  HypothesisReport hypotheses;
  double l_star = 0.0;
  double h_max = 0.0;
  double probe_length = 0.0;
  bool reached_cap = false;
};

/// Steps until t_end, until h reaches h_max, or until `stop_when` fires.
/// Throws AssertionFailure when a guaranteed bound fails on any step.
FrontRunResult run(const FrontRunConfig& config);

/// inf of u over nodes with physical x in [0, probe_length].
double window_infimum(const FrontState& s, double probe_length);

}  // namespace chemofront
