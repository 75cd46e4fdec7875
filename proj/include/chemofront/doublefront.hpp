#pragma once

#include <functional>
#include <vector>

#include "chemofront/classify.hpp"
#include "chemofront/frontsolver.hpp"

namespace chemofront {

/// Snapshot of the two-front problem on y in [0, 1], x = g + y (h - g).
struct DoubleFrontState {
  double t = 0.0;
  double g = -1.0;
  double h = 1.0;
  std::vector<double> u;  // zero at both end nodes
  std::vector<double> v1;
  std::vector<double> v2;
  int grid_n = 0;

  double dy() const { return 1.0 / static_cast<double>(grid_n - 1); }
  double width() const { return h - g; }
  double x(int j) const { return g + width() * j * dy(); }
};

/// Profile argument s runs over [-1, 1] from g0 to h0.
DoubleFrontState make_double_initial_state(double g0, double h0, const InitialProfile& profile,
                                           int grid_n, const ModelParams& p, double t0 = 0.0);

struct FrontVelocities {
  double g_prime = 0.0;  // -nu u_x(g)
  double h_prime = 0.0;  // -nu u_x(h)
};

/// Mirrored second-order one-sided stencils at both ends.
FrontVelocities front_velocities(const DoubleFrontState& s, double nu);

double stable_dt_double(const DoubleFrontState& s, const ModelParams& p, const CoefficientField& c);

DoubleFrontState step_double(const DoubleFrontState& s, double dt, const ModelParams& p,
                             const CoefficientField& c, const StepOptions& opts = {});

struct DoubleRunConfig {
  ModelParams params;
  CoefficientField coefficients;
  double g0 = -1.0;
  double h0 = 1.0;
  InitialProfile initial = InitialProfile::cosine(1.0);
  int grid_n = 257;
  double t0 = 0.0;
  double t_end = 50.0;
  double dt_max = 0.01;
  double h_max = 0.0;              // cap on both fronts, measured from the initial midpoint; 0: 25 l**
  double l_star_star = 0.0;        // 0: computed
  double probe_half_width = 0.0;   // 0: l** / 2, centred on the initial midpoint
  double sample_interval = 0.1;
  bool allow_h1_violation = false;
  double bound_tolerance = 1e-3;
  double monotone_tolerance = 1e-9;
  double blowup_guard = 1e3;
  bool enforce_bounds = true;
  /// Assert |g - c| = |h - c| (and an even profile) every step. Only meaningful
  /// for even data and x-independent coefficients.
  bool check_symmetry = false;
  double symmetry_tolerance = 1e-8;
  double vanishing_width_tolerance = 0.05;
  ClassifyThresholds thresholds;   // h_max and center are filled in by the run
  bool stop_on_verdict = true;
  StepOptions step;
  std::vector<double> snapshot_times;
  std::function<void(const DoubleFrontState&)> observer;
};

struct DoubleRunResult {
  RunSeries series;
  Outcome outcome;
  DoubleFrontState final_state;
  std::vector<DoubleFrontState> snapshots;
  RunDiagnostics diagnostics;
  HypothesisReport hypotheses;
  double l_star_star = 0.0;
  double h_max = 0.0;
  double center = 0.0;
  double probe_half_width = 0.0;
  double max_symmetry_error = 0.0;
  bool reached_cap = false;
};

/// Steps to a verdict (or t_end) and classifies. A Vanishing verdict asserts a
/// final width <= l** + vanishing_width_tolerance.
DoubleRunResult run_double(const DoubleRunConfig& config);

}  // namespace chemofront
