#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "chemofront/errors.hpp"
#include "chemofront/fixeddomain.hpp"
#include "chemofront/spectrum.hpp"

using namespace chemofront;
using oracle::pi;

TEST_CASE("logistic orbit: constants") {
  CHECK(logistic_entire_solution(Sampler::constant(2.0), Sampler::constant(1.0), 1.0)(0.3) == doctest::Approx(2.0));
  CHECK(logistic_entire_solution(Sampler::constant(1.0), Sampler::constant(2.0), 1.0)(0.7) == doctest::Approx(0.5));
  CHECK(logistic_entire_solution(Sampler::constant(1.0), Sampler::constant(2.0), 1.0).is_constant());
}

TEST_CASE("logistic orbit matches the Bernoulli closed form") {
  const auto orbit = logistic_entire_solution(Sampler::sin_periodic(1.0, 0.5, 1.0), Sampler::constant(1.0), 1.0);
  double err = 0.0;
  for (double t : {0.0, 0.123, 0.37, 0.5, 0.81, 1.0, 2.44}) {
    err = std::max(err, std::abs(orbit(t) - oracle::bernoulli_periodic_logistic(1.0, 0.5, 1.0, 1.0, t)));
  }
  CHECK(err < 1e-8);
  // The orbit solves the ODE: compare its derivative with u (a - b u).
  for (double t : {0.1, 0.45, 0.9}) {
    const double u = orbit(t);
    CHECK(orbit.derivative(t) == doctest::Approx(u * (1.0 + 0.5 * std::sin(2 * pi * t) - u)).epsilon(1e-6));
  }
}

TEST_CASE("half-line homogeneous logistic") {
  HalfLineConfig cfg;
  cfg.coefficients = CoefficientField::constant(1, 1);
  cfg.grid_n = 128;
  cfg.t_end = 15.0;
  auto r = run_halfline(cfg);
  for (double v : r.final_state.u) CHECK(v == doctest::Approx(1.0).epsilon(1e-5));

  cfg.coefficients = CoefficientField::constant(2, 1);
  cfg.initial = InitialProfile::constant(0.1);
  r = run_halfline(cfg);
  for (double v : r.final_state.u) CHECK(v == doctest::Approx(2.0).epsilon(1e-5));

  cfg.L = 5.0;
  CHECK_THROWS_AS(run_halfline(cfg), ConfigError);
}

TEST_CASE("half-line persistence with chemotaxis") {
  HalfLineConfig cfg;
  cfg.params.chi1 = 0.2;
  cfg.params.mu1 = 1.0;
  cfg.params.chi2 = 0.3;
  cfg.params.mu2 = 1.0;
  cfg.coefficients = CoefficientField::make(Sampler::cos_space(1.0, 0.2, 5.0), Sampler::constant(1.0),
                                            {0.8, 1.2, 1.0, 1.0});
  cfg.grid_n = 256;
  cfg.t_end = 20.0;
  const auto r = run_halfline(cfg);
  CHECK(r.persistence_checked);
  CHECK(r.interior_min >= r.hypotheses.m0 - 0.02);
  CHECK(r.interior_max <= r.hypotheses.M0 + 1.0 + 0.02);
}

TEST_CASE("fixed intervals: verdicts follow the eigenvalue sign") {
  const auto c = CoefficientField::constant(1, 1);
  auto bump = [](int n, bool mixed) {
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) {
      const double s = j / (n - 1.0);
      u[j] = 0.1 * (mixed ? std::cos(pi * s / 2) : std::sin(pi * s));
    }
    return u;
  };
  FixedRunConfig fc;
  fc.t_end = 40.0;
  const int n = 101;
  const auto m3 = run_fixed_mixed({}, c, 3.0, bump(n, true), fc);
  CHECK(m3.verdict == FixedVerdict::Persists);
  CHECK(m3.principal_exponent > 0.0);
  const auto m1 = run_fixed_mixed({}, c, 1.0, bump(n, true), fc);
  CHECK(m1.verdict == FixedVerdict::Decays);
  CHECK(m1.principal_exponent < 0.0);
  CHECK(run_fixed_dirichlet({}, 1, 1, 0, 4, bump(n, false), fc).verdict == FixedVerdict::Persists);
  CHECK(run_fixed_dirichlet({}, 1, 1, 0, 2, bump(n, false), fc).verdict == FixedVerdict::Decays);
  const auto zero = run_fixed_mixed({}, c, 3.0, std::vector<double>(n, 0.0), fc);
  for (double v : zero.u) CHECK(v == 0.0);
  const auto zd = run_fixed_dirichlet({}, 1, 1, 0, 4, std::vector<double>(n, 0.0), fc);
  for (double v : zd.u) CHECK(v == 0.0);
}

TEST_CASE("fixed interval agrees with an explicit reference") {
  const auto c = CoefficientField::constant(1, 1);
  const int n = 51;
  std::vector<double> u0(n);
  for (int j = 0; j < n; ++j) u0[j] = 0.3 * std::cos(pi * j / (2.0 * (n - 1)));
  FixedRunConfig fc;
  fc.t_end = 2.0;
  fc.dt_max = 2e-4;
  fc.assert_persistence = false;
  const auto r = run_fixed_mixed({}, c, 3.0, u0, fc);
  const auto ref = oracle::fixed_explicit(u0, 3.0, true, 1.0, 1.0, 2.0);
  CHECK(oracle::max_abs_diff(r.u, ref) < 2e-3);
}
