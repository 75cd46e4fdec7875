#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "chemofront/doublefront.hpp"
#include "chemofront/errors.hpp"
#include "chemofront/transport.hpp"

using namespace chemofront;
using oracle::pi;

TEST_CASE("zero data freezes both fronts") {
  ModelParams p;
  const auto c = CoefficientField::constant(1, 1);
  auto s = make_double_initial_state(-1.0, 2.0, InitialProfile::cosine(0.0), 65, p);
  for (int i = 0; i < 10; ++i) s = step_double(s, 0.01, p, c);
  CHECK(s.g == -1.0);
  CHECK(s.h == 2.0);
}

TEST_CASE("front velocities of cos(pi x / 2) on [-1, 1]") {
  ModelParams p;
  const auto s = make_double_initial_state(-1.0, 1.0, InitialProfile::cosine(1.0), 1025, p);
  const auto v = front_velocities(s, 1.0);
  CHECK(v.h_prime == doctest::Approx(pi / 2).epsilon(1e-5));
  CHECK(v.g_prime == doctest::Approx(-pi / 2).epsilon(1e-5));
}

TEST_CASE("even data keeps g' = -h'") {
  ModelParams p;
  p.chi1 = 0.3;
  p.mu1 = 1.0;
  const auto c = CoefficientField::make(Sampler::sin_periodic(1.0, 0.5, 1.0), Sampler::constant(2.0),
                                        {0.5, 1.5, 2.0, 2.0});
  auto s = make_double_initial_state(-1.5, 1.5, InitialProfile::cosine(0.8), 129, p);
  for (int i = 0; i < 200; ++i) {
    const auto v = front_velocities(s, p.nu);
    REQUIRE(std::abs(v.g_prime + v.h_prime) < 1e-10);
    s = step_double(s, std::min(0.01, stable_dt_double(s, p, c)), p, c);
  }
  CHECK(std::abs(s.g + s.h) < 1e-10);
}

TEST_CASE("agrees with an explicit Euler reference solver") {
  ModelParams p;
  const auto c = CoefficientField::constant(1, 1);
  // Asymmetric data so the two fronts move differently.
  const auto prof = InitialProfile::custom([](double s) { return 0.5 * (1.0 - s * s) * (1.2 + 0.5 * s); });
  DoubleRunConfig cfg;
  cfg.coefficients = c;
  cfg.g0 = -2.0;
  cfg.h0 = 2.0;
  cfg.initial = prof;
  cfg.grid_n = 81;
  cfg.t_end = 1.0;
  cfg.dt_max = 2e-4;
  cfg.l_star_star = pi;
  cfg.stop_on_verdict = false;
  const auto r = run_double(cfg);
  const auto init = make_double_initial_state(-2.0, 2.0, prof, 81, p);
  const auto ref = oracle::double_front_explicit(init.u, -2.0, 2.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(r.final_state.g == doctest::Approx(ref.g).epsilon(2e-3));
  CHECK(r.final_state.h == doctest::Approx(ref.h).epsilon(2e-3));
  CHECK(oracle::max_abs_diff(r.final_state.u, ref.u) < 3e-3);
  CHECK(r.final_state.h > 2.0);
  CHECK(r.final_state.g < -2.0);
}

TEST_CASE("initial data must vanish at both ends") {
  ModelParams p;
  CHECK_THROWS_AS(make_double_initial_state(-1.0, 1.0, InitialProfile::constant(0.5), 65, p), ConfigError);
  CHECK_THROWS_AS(make_double_initial_state(1.0, -1.0, InitialProfile::cosine(1.0), 65, p), ConfigError);
}
