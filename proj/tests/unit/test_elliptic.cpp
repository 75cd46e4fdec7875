#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "chemofront/elliptic.hpp"

using namespace chemofront;
using oracle::pi;

TEST_CASE("trivial sources") {
  std::vector<double> u(33, 2.0);
  for (double v : solve_potential(u, 0.5, 3.0, 4.0)) CHECK(v == doctest::Approx(12.0));
  std::vector<double> z(33, 0.0);
  for (double v : solve_potential(z, 0.5, 3.0, 4.0)) CHECK(v == 0.0);
  for (double v : potential_oracle_reflection(u, 0.5, 3.0, 4.0)) CHECK(v == doctest::Approx(12.0).epsilon(1e-8));
}

TEST_CASE("cosine modes are solved exactly on the grid") {
  const int n = 65;
  const double h = 3.0;
  for (int k = 0; k <= 4; ++k) {
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) u[j] = std::cos(k * pi * j / (n - 1.0));
    const auto v = solve_potential(u, 1.5, 2.0, h);
    CHECK(oracle::max_abs_diff(v, oracle::cosine_mode_potential(k, 1.5, 2.0, h, n)) < 1e-12);
    // ... and approximate the continuous solution to O(dx^2).
    double err = 0.0;
    for (int j = 0; j < n; ++j) err = std::max(err, std::abs(v[j] - 2.0 * u[j] / (1.5 + std::pow(k * pi / h, 2))));
    const double dx = h / (n - 1);
    CHECK(err < 5.0 * dx * dx);
  }
}

TEST_CASE("reflection oracle agrees on cos(pi x / h)") {
  const int n = 64;
  const double h = 2.0;
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = 1.0 + std::cos(pi * j / (n - 1.0));
  const auto a = solve_potential(u, 1.0, 1.0, h);
  const auto b = potential_oracle_reflection(u, 1.0, 1.0, h);
  const double dx = h / (n - 1);
  CHECK(oracle::max_abs_diff(a, b) < std::max(1e-6, 5 * dx * dx));
}

TEST_CASE("bound diagnostics") {
  ModelParams p;
  p.chi2 = 1.0;
  p.mu2 = 1.0;
  std::vector<double> one(41, 1.0);
  const auto pp = solve_potentials(one, p, 2.0);
  const auto combo = check_combo_bound(pp, one, p, compute_M(p));
  CHECK(combo.value == doctest::Approx(1.0));
  CHECK(std::abs(combo.residual) < 1e-12);
  CHECK_FALSE(combo.violated);
  const auto grad = check_gradient_bound(pp, one, p);
  CHECK(grad.value == doctest::Approx(0.0));

  ModelParams none;
  const auto pp0 = solve_potentials(one, none, 2.0);
  CHECK(check_gradient_bound(pp0, one, none).bound == 0.0);
  CHECK(check_gradient_bound(pp0, one, none).value == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    ModelParams q;
    q.chi1 = U(rng);
    q.chi2 = U(rng);
    q.mu1 = U(rng);
    q.mu2 = U(rng);
    q.lambda1 = 0.2 + U(rng);
    q.lambda2 = 0.2 + U(rng);
    const int n = 65;
    const double h = 0.5 + 3 * U(rng);
    std::vector<double> u(n);
    for (auto& v : u) v = U(rng);
    const auto pq = solve_potentials(u, q, h);
    CHECK(check_combo_bound(pq, u, q, compute_M(q)).residual <= 1e-12);
    CHECK_FALSE(check_gradient_bound(pq, u, q).violated);
  }
}
