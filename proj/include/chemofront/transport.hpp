#pragma once

#include <functional>
#include <span>
#include <vector>

#include "chemofront/model.hpp"

namespace chemofront {

/// Straightened interval: physical x = left + y * length for y in [0, 1].
struct TransportGeometry {
  double left = 0.0;
  double length = 1.0;
  double left_velocity = 0.0;   // d/dt of the left end
  double right_velocity = 0.0;  // d/dt of the right end
  bool left_dirichlet = false;  // u = 0 at y = 0, otherwise u_y = 0
  bool right_dirichlet = true;
};

/// Optional physical drift beta(t, x) entering as + beta u_x.
using DriftField = std::function<double(double, double)>;

/// Terms of u_t = u_xx + beta u_x - chi1 (u v1_x)_x + chi2 (u v2_x)_x + u (a - b u)
/// on the straightened grid. `params` may be null for the scalar equation.
struct TransportTerms {
  const CoefficientField* coefficients = nullptr;
  const ModelParams* params = nullptr;
  const std::vector<double>* v1 = nullptr;
  const std::vector<double>* v2 = nullptr;
  DriftField beta;
};

struct StepBudget {
  double advective = 0.0;  // 0.5 dy / max |drift| (infinity without drift)
  double reaction = 0.0;   // 0.1 / (a_sup + b_sup sup_u)
  double limit() const { return advective < reaction ? advective : reaction; }
};

/// Largest admissible step for the explicit part of the scheme.
StepBudget stable_step(std::span<const double> u, double t, const TransportGeometry& geo,
                       const TransportTerms& terms);

/// One first-order IMEX step: backward Euler diffusion, forward Euler for the
/// moving-mesh advection, chemotactic flux and logistic reaction. Drift terms
/// use upwinded minmod-limited reconstructions. Undershoots in [-1e-12, 0)
/// are clamped; larger negativity or non-finite values throw StabilityError.
std::vector<double> imex_step(std::span<const double> u, double t, double dt,
                              const TransportGeometry& geo, const TransportTerms& terms);

/// Largest |value| and smallest value helpers used by the solvers.
double sup_norm(std::span<const double> u);

}  // namespace chemofront
