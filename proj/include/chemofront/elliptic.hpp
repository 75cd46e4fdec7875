#pragma once

#include <span>
#include <vector>

#include "chemofront/model.hpp"

namespace chemofront {

/// Attractant/repellent concentrations on a uniform grid over [0, h].
struct PotentialPair {
  std::vector<double> v1;
  std::vector<double> v2;
  int grid_n = 0;  // number of nodes
  double h = 0.0;  // physical domain length
};

/// Solves 0 = v'' - lambda v + mu u on [0, h] with v'(0) = v'(h) = 0.
/// `u` holds values at the nodes x_j = j h / (n - 1); ghost-node reflection
/// keeps the Neumann rows second order. Exact solve of the discrete system.
std::vector<double> solve_potential(std::span<const double> u, double lambda, double mu, double h);

PotentialPair solve_potentials(std::span<const double> u, const ModelParams& p, double h);

struct ReflectionOracleOptions {
  int quad_n = 64;                  // Gauss-Legendre points per kernel s-subinterval (>= 64 total)
  double s_cutoff = 1e-12;          // truncate the s-integral where exp(-lambda s) < s_cutoff
  long long budget = 400'000'000;   // cap on kernel-weighted cell evaluations
};

/// Independent evaluation of the same boundary value problem through the
/// heat-kernel representation
///   v(x) = mu / (2 sqrt(pi)) int_0^inf int_R exp(-lambda s) s^{-1/2} exp(-|x-z|^2 / (4 s)) u~(z) dz ds,
/// where u~ is the even, 2h-periodic extension of the piecewise linear
/// interpolant of `u`. The s-integral is evaluated by quadrature (after the
/// substitution s = sigma^2) and the z-integral cell by cell over the
/// reflected copies that lie within ceil(6 sqrt(s_max) / h) + 2 periods.
std::vector<double> potential_oracle_reflection(std::span<const double> u, double lambda, double mu,
                                                double h,
                                                const ReflectionOracleOptions& opts = {});

struct BoundDiagnostic {
  double value = 0.0;      // observed left-hand side
  double bound = 0.0;      // right-hand side
  double residual = 0.0;   // value - bound
  double tolerance = 0.0;
  bool violated = false;   // residual > tolerance
};

/// max_x (chi2 lambda2 v2 - chi1 lambda1 v1) against M max(u).
BoundDiagnostic check_combo_bound(const PotentialPair& pp, std::span<const double> u,
                                  const ModelParams& p, double M);

/// max_x |d/dx (chi2 v2 - chi1 v1)| (centred differences) against the
/// gradient constant times max(u).
BoundDiagnostic check_gradient_bound(const PotentialPair& pp, std::span<const double> u,
                                     const ModelParams& p);

}  // namespace chemofront
