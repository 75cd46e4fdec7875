#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "chemofront/model.hpp"

namespace chemofront {

/// u_x(0) = u(l) = 0 on [0, l].
struct MixedBC {
  double l = 1.0;
};

/// u(l_minus) = u(l_plus) = 0.
struct DirichletBC {
  double l_minus = 0.0;
  double l_plus = 1.0;
};

using BoundaryKind = std::variant<MixedBC, DirichletBC>;

/// Throws ConfigError unless the interval has positive length.
void validate(const BoundaryKind& bc);
double interval_length(const BoundaryKind& bc);

/// Principal spectrum interval estimate of u_t = u_xx + a(t,x) u.
struct SpectrumInterval {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double horizon_used = 0.0;
  int window_count = 0;
  std::vector<double> window_exponents;
};

struct PrincipalEigenpair {
  double value = 0.0;
  std::vector<double> x;       // interior node positions
  std::vector<double> vector;  // positive, sup-normalised
  int iterations = 0;
};

/// Largest eigenvalue of the second-order finite difference discretisation
/// of d^2/dx^2 + a(x) under `bc` with `n` grid intervals. Located by Sturm
/// bisection, then polished by shifted inverse iteration to a relative
/// tolerance of 1e-10.
PrincipalEigenpair principal_eigenpair(const std::function<double(double)>& a_profile,
                                       const BoundaryKind& bc, int n);

double principal_eigenvalue_autonomous(const std::function<double(double)>& a_profile,
                                       const BoundaryKind& bc, int n);

/// Richardson combination (4 lambda(2n) - lambda(n)) / 3.
double principal_eigenvalue_extrapolated(const std::function<double(double)>& a_profile,
                                         const BoundaryKind& bc, int n);

struct ExponentOptions {
  double dt = 0.01;  // upper bound on the step; refined to resolve stiff principal modes
};

/// Evolves the linear equation from the principal mode of the period-averaged
/// operator with per-step sup-norm renormalisation and reports the min/max of the per-window log-growth rates
/// after a burn-in of at least 20% of the horizon. For time-dependent
/// coefficients windows are whole multiples of the period.
SpectrumInterval spectrum_interval(const CoefficientField& c, const BoundaryKind& bc, int n,
                                   double horizon, int windows, const ExponentOptions& opts = {});

struct SpectrumOptions {
  int grid_n = 128;
  double horizon = 0.0;  // 0: 100 time units, or 10 periods for time-dependent fields
  int windows = 4;
  double dt = 0.01;
  bool extrapolate = true;
  /// Placement window for the left endpoint when searching l** on
  /// space-dependent fields.
  double placement_min = 0.0;
  double placement_max = 100.0;
  int placements = 64;
};

/// Lower principal exponent lambda_min(a, bc). Autonomous fields use the
/// eigenvalue route, time-dependent ones the exponent estimator.
double lambda_min(const CoefficientField& c, const BoundaryKind& bc, const SpectrumOptions& opts = {});
/// Upper exponent (coincides with lambda_min for autonomous fields).
double lambda_max(const CoefficientField& c, const BoundaryKind& bc, const SpectrumOptions& opts = {});

/// Tolerance the bisection uses for "lambda(l*) = 0".
double estimator_tolerance(const CoefficientField& c);

/// Critical length under u_x(0) = u(l) = 0: lambda_min(a, l) crosses zero at l*.
double find_l_star(const CoefficientField& c, double tol = 1e-6, const SpectrumOptions& opts = {});

/// Critical length under Dirichlet-Dirichlet ends, maximised over placements
/// when a depends on x.
double find_l_star_star(const CoefficientField& c, double tol = 1e-6,
                        const SpectrumOptions& opts = {});

/// Closed-form upper bound l*(a_inf) = pi / (2 sqrt(a_inf)) >= l*(a).
double l_star_upper_bound(const CoefficientField& c);

}  // namespace chemofront
