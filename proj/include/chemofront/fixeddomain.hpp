#pragma once

#include <functional>
#include <vector>

#include "chemofront/model.hpp"
#include "chemofront/profile.hpp"
#include "chemofront/series.hpp"
#include "chemofront/transport.hpp"

namespace chemofront {

/// Truncated half-line [0, L], Neumann at both ends.
struct HalfLineState {
  double t = 0.0;
  double L = 1.0;
  std::vector<double> u;
  std::vector<double> v1;
  std::vector<double> v2;
  int grid_n = 0;

  double dx() const { return L / static_cast<double>(grid_n - 1); }
  double x(int j) const { return j * dx(); }
};

struct HalfLineConfig {
  ModelParams params;
  CoefficientField coefficients;
  double L = 0.0;                 // 0: 20 l*; smaller than 20 l* is rejected
  InitialProfile initial = InitialProfile::constant(0.5);  // s = x / L
  int grid_n = 512;
  double t0 = 0.0;
  double t_end = 50.0;
  double dt_max = 0.01;
  double sample_interval = 0.1;
  double probe_length = 0.0;      // 0: l*
  double transient = -1.0;        // persistence is checked for t >= t0 + transient; < 0: half the horizon
  double persistence_tolerance = 0.02;
  double boundary_layer_fraction = 0.1;  // right share of [0, L] excluded from the persistence check
  bool allow_h1_violation = false;
  double blowup_guard = 1e3;
  std::vector<double> snapshot_times;
};

struct HalfLineResult {
  RunSeries series;  // h column holds L, h_prime is 0
  HalfLineState final_state;
  std::vector<HalfLineState> snapshots;
  HypothesisReport hypotheses;
  double l_star = 0.0;
  bool persistence_checked = false;  // (H2) holds and inf u0 > 0
  double interior_min = 0.0;         // over the interior after the transient
  double interior_max = 0.0;
};

/// IMEX evolution of the half-line system. With (H2) and inf u0 > 0 asserts
/// m0 - tol <= u <= M0 + 1 + tol on the interior after the transient.
HalfLineResult run_halfline(const HalfLineConfig& config);

enum class FixedVerdict { Persists, Decays, Undetermined };
const char* to_string(FixedVerdict v);

struct FixedRunConfig {
  double t0 = 0.0;
  double t_end = 50.0;
  double dt_max = 0.01;
  double sample_interval = 0.1;
  double transient = -1.0;       // < 0: half the horizon
  double persist_floor = 1e-3;   // sup_u at or above this counts as persistent
  double decay_threshold = 1e-6; // sup_u below this counts as decayed
  /// Assert persistence when the principal exponent is positive, the drift is
  /// small (sup beta^2 / 4 < exponent / 2) and u0 is nonzero.
  bool assert_persistence = true;
};

struct FixedRunResult {
  RunSeries series;  // h column holds the interval length
  std::vector<double> x;
  std::vector<double> u;  // final profile
  double t = 0.0;
  double principal_exponent = 0.0;  // drift-free exponent at a_inf on the same interval
  double beta_sup = 0.0;            // largest |beta| met on the grid
  double min_sup_after_transient = 0.0;
  FixedVerdict verdict = FixedVerdict::Undetermined;
};

/// u_t = u_xx + beta u_x + u (a - b u) on [0, l], u_x(0) = u(l) = 0.
/// u0 holds nodal values at x_j = j l / (n - 1).
FixedRunResult run_fixed_mixed(const DriftField& beta, const CoefficientField& c, double l,
                               const std::vector<double>& u0, const FixedRunConfig& config = {});

/// Same equation with constant a0, b0 and u(l1) = u(l2) = 0.
FixedRunResult run_fixed_dirichlet(const DriftField& beta, double a0, double b0, double l1, double l2,
                                   const std::vector<double>& u0, const FixedRunConfig& config = {});

/// The positive periodic solution of u' = u (a(t) - b(t) u).
class LogisticOrbit {
 public:
  double value(double t) const;
  double derivative(double t) const;
  double operator()(double t) const { return value(t); }
  double period() const { return period_; }
  bool is_constant() const { return constant_; }
  int iterations() const { return iterations_; }
  /// As a space-independent Sampler.
  Sampler sampler() const;

 private:
  friend LogisticOrbit logistic_entire_solution(const Sampler&, const Sampler&, double);
  bool constant_ = false;
  double period_ = 1.0;
  double t_start_ = 0.0;
  int iterations_ = 0;
  std::vector<double> values_;       // nodes over one period, values_.back() == values_.front()
  std::vector<double> derivatives_;
};

/// Constants give a/b exactly. Otherwise the period map, integrated by RK4,
/// is iterated with damping 0.9 from a_inf / b_sup until successive
/// period-start values differ by < 1e-10. Throws NumericalError on non-convergence.
LogisticOrbit logistic_entire_solution(const Sampler& a, const Sampler& b, double period);

}  // namespace chemofront
