#include "chemofront/elliptic.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chemofront/errors.hpp"
#include "chemofront/tridiag.hpp"

namespace chemofront {
namespace {

void require_finite(std::span<const double> u, const char* what) {
  for (double v : u) {
    if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": non-finite input");
  }
}

double max_of(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, v);
  return m;
}

}  // namespace

std::vector<double> solve_potential(std::span<const double> u, double lambda, double mu, double h) {
  if (!(lambda > 0.0)) throw ConfigError("solve_potential requires lambda > 0");
  if (mu < 0.0) throw ConfigError("solve_potential requires mu >= 0");
  if (!(h > 0.0)) throw ConfigError("solve_potential requires h > 0");
  if (u.size() < 2) throw ConfigError("solve_potential requires at least two nodes");
  require_finite(u, "solve_potential");

  const std::size_t n = u.size();
  const double dx = h / static_cast<double>(n - 1);
  const double inv = 1.0 / (dx * dx);
  linalg::Tridiagonal a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.lower[i] = -inv;
    a.diag[i] = 2.0 * inv + lambda;
    a.upper[i] = -inv;
  }
  // Ghost nodes v_{-1} = v_1 and v_n = v_{n-2}.
  a.upper[0] = -2.0 * inv;
  a.lower[n - 1] = -2.0 * inv;

  std::vector<double> v(u.begin(), u.end());
  for (double& x : v) x *= mu;
  linalg::solve_in_place(a, v);
  return v;
}

PotentialPair solve_potentials(std::span<const double> u, const ModelParams& p, double h) {
  PotentialPair pp;
  pp.v1 = solve_potential(u, p.lambda1, p.mu1, h);
  pp.v2 = solve_potential(u, p.lambda2, p.mu2, h);
  pp.grid_n = static_cast<int>(u.size());
  pp.h = h;
  return pp;
}

namespace {

struct KernelTable {
  double lambda = 0.0;
  double h = 0.0;
  std::size_t nodes = 0;
  int quad_n = 0;
  double s_cutoff = 0.0;
  long long reach = 0;  // cells on each side
  std::vector<double> values;  // indexed by ((d + reach - 1) * kCellPoints + q)
};

constexpr int kCellPoints = 4;

// Resolvent kernel (2 sqrt(pi))^{-1} int_0^{s_max} e^{-lambda s} s^{-1/2} e^{-r^2/(4s)} ds.
// With s = sigma^2 and sigma = e^tau the integrand is smooth in tau, integrated
// by composite Gauss-Legendre over unit-width panels.
double resolvent_kernel(double r, double lambda, double sigma_max, int quad_n) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const double r2 = r * r;
  const double tau_hi = std::log(sigma_max);
  const double tau_lo = r > 0.0 ? std::log(0.5 * r) - 4.0 : tau_hi - 40.0;
  if (tau_lo >= tau_hi) return 0.0;
  const int panels = std::max(quad_n / 16, static_cast<int>(std::ceil(2.0 * (tau_hi - tau_lo))));
  const double width = (tau_hi - tau_lo) / panels;
  auto integrand = [&](double tau) {
    const double sigma = std::exp(tau);
    const double s = sigma * sigma;
    return sigma * std::exp(-lambda * s - r2 / (4.0 * s));
  };
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = tau_lo + k * width;
    total += Rule::integrate(integrand, a, a + width);
  }
  // Lower tail below tau_lo (only relevant for r == 0): int_0^{sigma_lo} ~ sigma_lo.
  if (r == 0.0) total += std::exp(tau_lo);
  return total / std::sqrt(std::numbers::pi);
}

const KernelTable& kernel_table(double lambda, double h, std::size_t nodes,
                                const ReflectionOracleOptions& opts) {
  thread_local KernelTable table;
  if (table.lambda == lambda && table.h == h && table.nodes == nodes && table.quad_n == opts.quad_n &&
      table.s_cutoff == opts.s_cutoff && !table.values.empty()) {
    return table;
  }
  const double dx = h / static_cast<double>(nodes - 1);
  const double s_max = std::log(1.0 / opts.s_cutoff) / lambda;
  const double copies = std::ceil(6.0 * std::sqrt(s_max) / h) + 2.0;
  const long long reach = static_cast<long long>(std::ceil(copies * h / dx));
  const long long work = static_cast<long long>(nodes) * 2 * reach * kCellPoints;
  if (work > opts.budget) {
    std::ostringstream os;
    os << "potential_oracle_reflection: quadrature budget exceeded (" << work << " > "
       << opts.budget << ")";
    throw NumericalError(os.str());
  }
  const double sigma_max = std::sqrt(s_max);
  const auto& xi = boost::math::quadrature::gauss<double, kCellPoints>::abscissa();

  KernelTable t;
  t.lambda = lambda;
  t.h = h;
  t.nodes = nodes;
  t.quad_n = opts.quad_n;
  t.s_cutoff = opts.s_cutoff;
  t.reach = reach;
  t.values.resize(static_cast<std::size_t>(2 * reach * kCellPoints));
  // Cell-local points on [0, 1]: 0.5 +- xi/2 for each positive abscissa (and 0.5 when present).
  std::vector<double> local;
  for (double a : xi) {
    local.push_back(0.5 + 0.5 * a);
    if (a != 0.0) local.push_back(0.5 - 0.5 * a);
  }
  for (long long d = -reach + 1; d <= reach; ++d) {
    for (int q = 0; q < kCellPoints; ++q) {
      const double r = std::abs((static_cast<double>(d) - local[q]) * dx);
      t.values[static_cast<std::size_t>((d + reach - 1) * kCellPoints + q)] =
          resolvent_kernel(r, lambda, sigma_max, opts.quad_n);
    }
  }
  table = std::move(t);
  return table;
}

}  // namespace

std::vector<double> potential_oracle_reflection(std::span<const double> u, double lambda, double mu,
                                                double h, const ReflectionOracleOptions& opts) {
  if (!(lambda > 0.0)) throw ConfigError("potential_oracle_reflection requires lambda > 0");
  if (mu < 0.0) throw ConfigError("potential_oracle_reflection requires mu >= 0");
  if (!(h > 0.0)) throw ConfigError("potential_oracle_reflection requires h > 0");
  if (u.size() < 2) throw ConfigError("potential_oracle_reflection requires at least two nodes");
  if (opts.quad_n < 64) throw ConfigError("potential_oracle_reflection requires quad_n >= 64");
  if (!(opts.s_cutoff > 0.0 && opts.s_cutoff < 1.0)) throw ConfigError("s_cutoff must lie in (0, 1)");
  require_finite(u, "potential_oracle_reflection");

  const std::size_t n = u.size();
  const double dx = h / static_cast<double>(n - 1);
  const KernelTable& table = kernel_table(lambda, h, n, opts);
  const long long period = 2 * static_cast<long long>(n - 1);
  // Even, 2h-periodic extension evaluated at lattice node m.
  auto extended = [&](long long m) {
    long long r = m % period;
    if (r < 0) r += period;
    if (r > static_cast<long long>(n - 1)) r = period - r;
    return u[static_cast<std::size_t>(r)];
  };

  const auto& xi = boost::math::quadrature::gauss<double, kCellPoints>::abscissa();
  const auto& wi = boost::math::quadrature::gauss<double, kCellPoints>::weights();
  std::vector<double> local, weight;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    local.push_back(0.5 + 0.5 * xi[k]);
    weight.push_back(0.5 * wi[k]);
    if (xi[k] != 0.0) {
      local.push_back(0.5 - 0.5 * xi[k]);
      weight.push_back(0.5 * wi[k]);
    }
  }

  std::vector<double> v(n, 0.0);
  const long long reach = table.reach;
  for (std::size_t i = 0; i < n; ++i) {
    const long long ii = static_cast<long long>(i);
    double acc = 0.0;
    for (long long d = -reach + 1; d <= reach; ++d) {
      // Cell [m, m+1] with m = i - d, so x_i - z = (d - xi) dx.
      const long long m = ii - d;
      const double left = extended(m), right = extended(m + 1);
      const double* kv = &table.values[static_cast<std::size_t>((d + reach - 1) * kCellPoints)];
      for (int q = 0; q < kCellPoints; ++q) {
        acc += weight[q] * kv[q] * ((1.0 - local[q]) * left + local[q] * right);
      }
    }
    v[i] = mu * acc * dx;
  }
  return v;
}

BoundDiagnostic check_combo_bound(const PotentialPair& pp, std::span<const double> u,
                                  const ModelParams& p, double M) {
  BoundDiagnostic d;
  double value = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pp.v1.size(); ++j) {
    value = std::max(value, p.chi2 * p.lambda2 * pp.v2[j] - p.chi1 * p.lambda1 * pp.v1[j]);
  }
  const double dx = pp.h / static_cast<double>(std::max(pp.grid_n - 1, 1));
  d.value = value;
  d.bound = M * max_of(u);
  d.residual = d.value - d.bound;
  d.tolerance = 10.0 * dx * dx;
  d.violated = d.residual > d.tolerance;
  return d;
}

BoundDiagnostic check_gradient_bound(const PotentialPair& pp, std::span<const double> u,
                                     const ModelParams& p) {
  BoundDiagnostic d;
  const std::size_t n = pp.v1.size();
  const double dx = pp.h / static_cast<double>(std::max(pp.grid_n - 1, 1));
  double value = 0.0;
  // End derivatives vanish by the Neumann conditions.
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double w_plus = p.chi2 * pp.v2[j + 1] - p.chi1 * pp.v1[j + 1];
    const double w_minus = p.chi2 * pp.v2[j - 1] - p.chi1 * pp.v1[j - 1];
    value = std::max(value, std::abs(w_plus - w_minus) / (2.0 * dx));
  }
  d.value = value;
  d.bound = gradient_bound_constant(p) * max_of(u);
  d.residual = d.value - d.bound;
  d.tolerance = 10.0 * dx * dx;
  d.violated = d.residual > d.tolerance;
  return d;
}

}  // namespace chemofront
