#pragma once
// Test-only reference implementations. Deliberately simple and independent
// of the library's numerics: explicit Euler, central differences, direct
// quadrature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

// Exact discrete solution of the Neumann potential problem for u = cos(k pi x / h)
// on n nodes with ghost reflection: the cosine mode is an eigenvector of the
// discrete Laplacian with eigenvalue -(4/dx^2) sin^2(k pi dx / (2h)).
inline std::vector<double> cosine_mode_potential(int k, double lambda, double mu, double h, int n) {
  const double dx = h / (n - 1);
  const double s = std::sin(k * pi * dx / (2.0 * h));
  const double denom = lambda + 4.0 * s * s / (dx * dx);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = mu * std::cos(k * pi * j * dx / h) / denom;
  return v;
}

// Periodic solution of u' = u (a(t) - b u) with a = a0 + a1 sin(2 pi t / T), b constant.
// w = 1/u solves w' = -a w + b, whose periodic solution is
// w(t) = b int_0^inf exp(-(A(t) - A(t - s))) ds with A the antiderivative of a.
inline double bernoulli_periodic_logistic(double a0, double a1, double T, double b, double t) {
  const double w = 2.0 * pi / T;
  auto A = [&](double tau) { return a0 * tau - a1 / w * std::cos(w * tau); };
  const double s_max = 60.0 / a0;
  const int m = 600000;  // composite Simpson
  const double ds = s_max / m;
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double s = i * ds;
    const double f = std::exp(-(A(t) - A(t - s)));
    const double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += wgt * f;
  }
  return 1.0 / (b * sum * ds / 3.0);
}

struct FrontReference {
  double h = 0.0;
  std::vector<double> u;
};

// Explicit Euler / central differences for the chemotaxis-free single front on
// y = x/h: u_t = u_yy/h^2 + y h'/h u_y + u (a - b u), u_y(0) = 0, u(1) = 0,
// h' = -nu u_x(h).
inline FrontReference single_front_explicit(std::vector<double> u, double h, double a, double b, double nu,
                                            double T) {
  const int n = static_cast<int>(u.size());
  const double dy = 1.0 / (n - 1);
  double t = 0.0;
  std::vector<double> next(u.size());
  while (t < T - 1e-14) {
    const double dt = std::min(0.2 * dy * dy * h * h, T - t);
    const double hp = -nu * (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dy * h);
    for (int j = 0; j < n - 1; ++j) {
      const double left = j == 0 ? u[1] : u[j - 1];
      const double uyy = (u[j + 1] - 2.0 * u[j] + left) / (dy * dy);
      const double uy = (u[j + 1] - left) / (2.0 * dy);
      const double y = j * dy;
      next[j] = u[j] + dt * (uyy / (h * h) + y * hp / h * uy + u[j] * (a - b * u[j]));
    }
    next[n - 1] = 0.0;
    u.swap(next);
    h += dt * hp;
    t += dt;
  }
  return {h, u};
}

struct DoubleReference {
  double g = 0.0;
  double h = 0.0;
  std::vector<double> u;
};

// Same scheme for x = g + y (h - g), Dirichlet at both ends.
inline DoubleReference double_front_explicit(std::vector<double> u, double g, double h, double a, double b,
                                             double nu, double T) {
  const int n = static_cast<int>(u.size());
  const double dy = 1.0 / (n - 1);
  double t = 0.0;
  std::vector<double> next(u.size(), 0.0);
  while (t < T - 1e-14) {
    const double w = h - g;
    const double dt = std::min(0.2 * dy * dy * w * w, T - t);
    const double gp = -nu * (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy * w);
    const double hp = -nu * (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dy * w);
    for (int j = 1; j < n - 1; ++j) {
      const double uyy = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (dy * dy);
      const double uy = (u[j + 1] - u[j - 1]) / (2.0 * dy);
      const double y = j * dy;
      const double mesh = ((1.0 - y) * gp + y * hp) / w;
      next[j] = u[j] + dt * (uyy / (w * w) + mesh * uy + u[j] * (a - b * u[j]));
    }
    u.swap(next);
    g += dt * gp;
    h += dt * hp;
    t += dt;
  }
  return {g, h, u};
}

// Explicit Euler for u_t = u_xx + u (a - b u) on a fixed interval.
// mixed: u_x(0) = 0, u(l) = 0; otherwise Dirichlet at both ends.
inline std::vector<double> fixed_explicit(std::vector<double> u, double length, bool mixed, double a, double b,
                                          double T) {
  const int n = static_cast<int>(u.size());
  const double dx = length / (n - 1);
  const double dt0 = 0.2 * dx * dx;
  std::vector<double> next(u.size(), 0.0);
  double t = 0.0;
  while (t < T - 1e-14) {
    const double dt = std::min(dt0, T - t);
    const int first = mixed ? 0 : 1;
    for (int j = first; j < n - 1; ++j) {
      const double left = j == 0 ? u[1] : u[j - 1];
      next[j] = u[j] + dt * ((u[j + 1] - 2.0 * u[j] + left) / (dx * dx) + u[j] * (a - b * u[j]));
    }
    next[n - 1] = 0.0;
    if (!mixed) next[0] = 0.0;
    u.swap(next);
    t += dt;
  }
  return u;
}

inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace oracle
