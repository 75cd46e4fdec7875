#include "chemofront/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "chemofront/errors.hpp"
#include "chemofront/tridiag.hpp"

namespace chemofront {
namespace {

struct IntervalGrid {
  double left = 0.0;
  double dx = 0.0;
  bool mixed = false;
  std::vector<double> x;         // unknown nodes
  linalg::Tridiagonal laplacian; // node form; mixed row 0 carries the ghost factor 2
};

IntervalGrid make_grid(const BoundaryKind& bc, int n) {
  validate(bc);
  if (n < 8) throw ConfigError("eigenvalue grid requires n >= 8 intervals");
  IntervalGrid g;
  std::size_t unknowns = 0;
  if (const auto* m = std::get_if<MixedBC>(&bc)) {
    g.mixed = true;
    g.left = 0.0;
    g.dx = m->l / n;
    unknowns = static_cast<std::size_t>(n);
    for (int i = 0; i < n; ++i) g.x.push_back(i * g.dx);
  } else {
    const auto& d = std::get<DirichletBC>(bc);
    g.left = d.l_minus;
    g.dx = (d.l_plus - d.l_minus) / n;
    unknowns = static_cast<std::size_t>(n - 1);
    for (int i = 1; i < n; ++i) g.x.push_back(d.l_minus + i * g.dx);
  }
  const double inv = 1.0 / (g.dx * g.dx);
  g.laplacian = linalg::Tridiagonal(unknowns);
  for (std::size_t i = 0; i < unknowns; ++i) {
    g.laplacian.lower[i] = inv;
    g.laplacian.diag[i] = -2.0 * inv;
    g.laplacian.upper[i] = inv;
  }
  if (g.mixed) g.laplacian.upper[0] = 2.0 * inv;
  return g;
}

// Lowest principal mode of the Laplacian on the interval, used to size the time step.
double laplacian_principal_magnitude(const BoundaryKind& bc) {
  const double L = interval_length(bc);
  return std::holds_alternative<MixedBC>(bc) ? std::numbers::pi * std::numbers::pi / (4 * L * L)
                                             : std::numbers::pi * std::numbers::pi / (L * L);
}

}  // namespace

void validate(const BoundaryKind& bc) {
  if (const auto* m = std::get_if<MixedBC>(&bc)) {
    if (!(m->l > 0.0) || !std::isfinite(m->l)) throw ConfigError("mixed BC requires l > 0");
  } else {
    const auto& d = std::get<DirichletBC>(bc);
    if (!(d.l_plus > d.l_minus) || !std::isfinite(d.l_plus - d.l_minus)) {
      throw ConfigError("Dirichlet BC requires l_minus < l_plus");
    }
  }
}

double interval_length(const BoundaryKind& bc) {
  if (const auto* m = std::get_if<MixedBC>(&bc)) return m->l;
  const auto& d = std::get<DirichletBC>(bc);
  return d.l_plus - d.l_minus;
}

PrincipalEigenpair principal_eigenpair(const std::function<double(double)>& a_profile,
                                       const BoundaryKind& bc, int n) {
  IntervalGrid g = make_grid(bc, n);
  const std::size_t m = g.x.size();
  const double inv = 1.0 / (g.dx * g.dx);

  // Symmetrised operator: the mixed ghost row is balanced by scaling node 0 by 1/sqrt(2).
  std::vector<double> diag(m), off(m > 0 ? m - 1 : 0, inv);
  for (std::size_t i = 0; i < m; ++i) {
    const double ai = a_profile(g.x[i]);
    if (!std::isfinite(ai)) throw ConfigError("a_profile returned a non-finite value");
    diag[i] = ai - 2.0 * inv;
  }
  if (g.mixed && m > 1) off[0] = std::numbers::sqrt2 * inv;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < m ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  hi += 1e-12 * scale;
  lo -= 1e-12 * scale;
  const int total = static_cast<int>(m);
  // All eigenvalues lie below hi; shrink [lo, hi] around the largest.
  for (int it = 0; it < 200 && hi - lo > 1e-9 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (linalg::count_eigenvalues_below(diag, off, mid) == total) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Inverse iteration with shift just above the spectrum: (sigma I - B) is SPD.
  const double sigma = hi + 1e-10 * scale;
  linalg::Tridiagonal shifted(m);
  for (std::size_t i = 0; i < m; ++i) {
    shifted.diag[i] = sigma - diag[i];
    if (i > 0) shifted.lower[i] = -off[i - 1];
    if (i + 1 < m) shifted.upper[i] = -off[i];
  }
  std::vector<double> w(m, 1.0), bw(m);
  linalg::Tridiagonal sym(m);
  for (std::size_t i = 0; i < m; ++i) {
    sym.diag[i] = diag[i];
    if (i > 0) sym.lower[i] = off[i - 1];
    if (i + 1 < m) sym.upper[i] = off[i];
  }
  auto rayleigh = [&](const std::vector<double>& v) {
    sym.apply(v, bw);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      num += v[i] * bw[i];
      den += v[i] * v[i];
    }
    return num / den;
  };
  double value = rayleigh(w);
  int iterations = 0;
  bool converged = false;
  constexpr int kMaxIterations = 100;
  for (; iterations < kMaxIterations; ++iterations) {
    linalg::solve_in_place(shifted, w);
    double norm = 0.0;
    for (double v : w) norm = std::max(norm, std::abs(v));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw NumericalError("inverse iteration produced a degenerate iterate");
    }
    for (double& v : w) v /= norm;
    const double next = rayleigh(w);
    const double change = std::abs(next - value);
    value = next;
    if (change <= 1e-10 * std::max(1.0, std::abs(value)) && iterations > 0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericalError("principal eigenvalue: inverse iteration did not converge");
  }

  PrincipalEigenpair out;
  out.value = value;
  out.x = g.x;
  out.iterations = iterations + 1;
  out.vector = w;
  if (g.mixed) out.vector[0] *= std::numbers::sqrt2;
  double sup = 0.0;
  for (double v : out.vector) sup = std::max(sup, std::abs(v));
  const double sign = out.vector[0] + out.vector[m / 2] >= 0 ? 1.0 : -1.0;
  for (double& v : out.vector) v *= sign / sup;
  return out;
}

double principal_eigenvalue_autonomous(const std::function<double(double)>& a_profile,
                                       const BoundaryKind& bc, int n) {
  return principal_eigenpair(a_profile, bc, n).value;
}

double principal_eigenvalue_extrapolated(const std::function<double(double)>& a_profile,
                                         const BoundaryKind& bc, int n) {
  const double coarse = principal_eigenvalue_autonomous(a_profile, bc, n);
  const double fine = principal_eigenvalue_autonomous(a_profile, bc, 2 * n);
  return (4.0 * fine - coarse) / 3.0;
}

SpectrumInterval spectrum_interval(const CoefficientField& c, const BoundaryKind& bc, int n,
                                   double horizon, int windows, const ExponentOptions& opts) {
  IntervalGrid g = make_grid(bc, n);
  if (windows < 4) throw ConfigError("spectrum_interval requires at least 4 windows");
  const bool periodic = c.depends_on_time();
  const double period = c.period();
  if (periodic ? horizon < 10.0 * period * (1 - 1e-12) : horizon < 100.0 * (1 - 1e-12)) {
    std::ostringstream os;
    os << "spectrum_interval horizon " << horizon << " is below the minimum ("
       << (periodic ? "10 periods" : "100 time units") << ")";
    throw ConfigError(os.str());
  }
  if (!(opts.dt > 0.0)) throw ConfigError("spectrum_interval requires dt > 0");

  // Resolve the principal decay/growth rate so the step does not distort it.
  const double rate = laplacian_principal_magnitude(bc) + c.bounds().a_sup;
  const double dt_target = std::min(opts.dt, 0.5 / rate);

  double window_len = 0.0;
  long steps_per_window = 0;
  double dt = 0.0;
  if (periodic) {
    const long periods_per_window =
        std::max(1L, static_cast<long>(std::floor(0.8 * horizon / windows / period + 1e-9)));
    const long steps_per_period = static_cast<long>(std::ceil(period / dt_target - 1e-9));
    dt = period / static_cast<double>(steps_per_period);
    steps_per_window = periods_per_window * steps_per_period;
    window_len = static_cast<double>(periods_per_window) * period;
  } else {
    window_len = 0.8 * horizon / windows;
    steps_per_window = static_cast<long>(std::ceil(window_len / dt_target - 1e-9));
    dt = window_len / static_cast<double>(steps_per_window);
  }
  const long total_steps = static_cast<long>(std::llround(horizon / dt));
  const long burn_steps = total_steps - static_cast<long>(windows) * steps_per_window;
  if (burn_steps < 0) throw ConfigError("spectrum_interval: windows exceed horizon");

  const std::size_t m = g.x.size();
  // Start from the principal mode of the period-averaged operator: exact for
  // space-independent a, and it removes the slow higher-mode transient that
  // an all-ones start carries on long intervals.
  auto mean_a = [&](double x) {
    constexpr int samples = 64;
    double sum = 0.0;
    for (int k = 0; k < samples; ++k) sum += c.a(k * period / samples, x);
    return sum / samples;
  };
  std::vector<double> u = principal_eigenpair(mean_a, bc, n).vector;
  std::vector<double> rhs(m), tmp(m);
  constexpr double gamma = 2.0 - std::numbers::sqrt2;
  const double c_trap = 0.5 * gamma;
  const double c_bdf = (1.0 - gamma) / (2.0 - gamma);
  const double w_star = 1.0 / (gamma * (2.0 - gamma));
  const double w_prev = (1.0 - gamma) * (1.0 - gamma) / (gamma * (2.0 - gamma));

  linalg::Tridiagonal op = g.laplacian;
  linalg::Tridiagonal system(m);
  auto set_operator = [&](double t) {
    for (std::size_t i = 0; i < m; ++i) op.diag[i] = g.laplacian.diag[i] + c.a(t, g.x[i]);
  };
  auto set_implicit = [&](double coeff) {
    for (std::size_t i = 0; i < m; ++i) {
      system.lower[i] = -coeff * op.lower[i];
      system.diag[i] = 1.0 - coeff * op.diag[i];
      system.upper[i] = -coeff * op.upper[i];
    }
  };

  SpectrumInterval out;
  out.horizon_used = static_cast<double>(total_steps) * dt;
  out.window_count = windows;
  double window_log = 0.0;
  long in_window = 0;
  for (long step = 0; step < total_steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    // TR-BDF2: trapezoid to t + gamma dt, then BDF2 to t + dt.
    set_operator(t);
    op.apply(u, tmp);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = u[i] + c_trap * dt * tmp[i];
    set_operator(t + gamma * dt);
    set_implicit(c_trap * dt);
    linalg::solve_in_place(system, rhs);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = w_star * rhs[i] - w_prev * u[i];
    set_operator(t + dt);
    set_implicit(c_bdf * dt);
    linalg::solve_in_place(system, tmp);

    double norm = 0.0;
    for (double v : tmp) norm = std::max(norm, std::abs(v));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw NumericalError("spectrum_interval overflow guard: renormalisation factor is degenerate");
    }
    for (std::size_t i = 0; i < m; ++i) u[i] = tmp[i] / norm;
    if (step >= burn_steps) {
      window_log += std::log(norm);
      if (++in_window == steps_per_window) {
        out.window_exponents.push_back(window_log / window_len);
        window_log = 0.0;
        in_window = 0;
      }
    }
  }
  out.lambda_min = *std::min_element(out.window_exponents.begin(), out.window_exponents.end());
  out.lambda_max = *std::max_element(out.window_exponents.begin(), out.window_exponents.end());
  return out;
}

namespace {

double default_horizon(const CoefficientField& c, const SpectrumOptions& opts) {
  if (opts.horizon > 0.0) return opts.horizon;
  return c.depends_on_time() ? 10.0 * c.period() : 100.0;
}

std::pair<double, double> exponent_pair(const CoefficientField& c, const BoundaryKind& bc,
                                        const SpectrumOptions& opts) {
  if (!c.depends_on_time()) {
    auto profile = [&c](double x) { return c.a(0.0, x); };
    const double v = opts.extrapolate ? principal_eigenvalue_extrapolated(profile, bc, opts.grid_n)
                                      : principal_eigenvalue_autonomous(profile, bc, opts.grid_n);
    return {v, v};
  }
  SpectrumInterval s = spectrum_interval(c, bc, opts.grid_n, default_horizon(c, opts), opts.windows,
                                         ExponentOptions{opts.dt});
  return {s.lambda_min, s.lambda_max};
}

// Bisection for the zero of an increasing function of the length.
template <typename F>
double bisect_length(F&& f, double lo, double hi, double tol, double value_tol, const char* what) {
  double flo = f(lo);
  for (int k = 0; k < 20 && flo >= 0.0; ++k) {
    lo /= 10.0;
    flo = f(lo);
  }
  double fhi = f(hi);
  for (int k = 0; k < 20 && fhi <= 0.0; ++k) {
    hi *= 10.0;
    fhi = f(hi);
  }
  if (!(flo < 0.0 && fhi > 0.0)) {
    std::ostringstream os;
    os << what << ": bracket failure (lambda(" << lo << ") = " << flo << ", lambda(" << hi
       << ") = " << fhi << ")";
    throw NumericalError(os.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (hi - lo <= tol && std::abs(fm) <= value_tol) return mid;
    if (fm > 0.0) {
      hi = mid;
    } else if (fm < 0.0) {
      lo = mid;
    } else {
      return mid;
    }
  }
  std::ostringstream os;
  os << what << ": bisection did not meet tolerance, bracket [" << lo << ", " << hi << "]";
  throw NumericalError(os.str());
}

}  // namespace

double lambda_min(const CoefficientField& c, const BoundaryKind& bc, const SpectrumOptions& opts) {
  return exponent_pair(c, bc, opts).first;
}

double lambda_max(const CoefficientField& c, const BoundaryKind& bc, const SpectrumOptions& opts) {
  return exponent_pair(c, bc, opts).second;
}

double estimator_tolerance(const CoefficientField& c) { return c.depends_on_time() ? 1e-4 : 1e-8; }

double find_l_star(const CoefficientField& c, double tol, const SpectrumOptions& opts) {
  if (!(tol > 0.0)) throw ConfigError("find_l_star: tol must be positive");
  const double a_inf = c.bounds().a_inf;
  if (!(a_inf > 0.0)) throw NumericalError("find_l_star: bracket failure, a_inf <= 0");
  auto f = [&](double l) { return lambda_min(c, MixedBC{l}, opts); };
  return bisect_length(f, 1e-2, 1e3 * std::max(1.0, 1.0 / std::sqrt(a_inf)), tol,
                       estimator_tolerance(c), "find_l_star");
}

double find_l_star_star(const CoefficientField& c, double tol, const SpectrumOptions& opts) {
  if (!(tol > 0.0)) throw ConfigError("find_l_star_star: tol must be positive");
  const double a_inf = c.bounds().a_inf;
  if (!(a_inf > 0.0)) throw NumericalError("find_l_star_star: bracket failure, a_inf <= 0");
  auto f = [&](double L) {
    if (!c.depends_on_space()) return lambda_min(c, DirichletBC{0.0, L}, opts);
    if (opts.placements < 1 || !(opts.placement_max >= opts.placement_min)) {
      throw ConfigError("find_l_star_star: invalid placement window");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < opts.placements; ++k) {
      const double left =
          opts.placements == 1
              ? opts.placement_min
              : opts.placement_min + (opts.placement_max - opts.placement_min) * k / (opts.placements - 1);
      best = std::max(best, lambda_min(c, DirichletBC{left, left + L}, opts));
    }
    return best;
  };
  return bisect_length(f, 2e-2, 2e3 * std::max(1.0, 1.0 / std::sqrt(a_inf)), tol,
                       estimator_tolerance(c), "find_l_star_star");
}

double l_star_upper_bound(const CoefficientField& c) {
  return std::numbers::pi / (2.0 * std::sqrt(c.bounds().a_inf));
}

}  // namespace chemofront
