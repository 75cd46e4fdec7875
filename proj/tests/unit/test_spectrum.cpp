#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "chemofront/errors.hpp"
#include "chemofront/spectrum.hpp"
#include "chemofront/tridiag.hpp"

using namespace chemofront;
using oracle::pi;

TEST_CASE("Thomas solve and Sturm count") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t n = 40;
  linalg::Tridiagonal A(n);
  for (std::size_t i = 0; i < n; ++i) {
    A.lower[i] = U(rng);
    A.upper[i] = U(rng);
    A.diag[i] = 3.0 + U(rng);
  }
  std::vector<double> x(n), b(n);
  for (auto& v : x) v = U(rng);
  A.apply(x, b);
  linalg::solve_in_place(A, b);
  CHECK(oracle::max_abs_diff(x, b) < 1e-12);

  // Second-difference matrix: eigenvalues 2 - 2 cos(k pi / (n + 1)).
  std::vector<double> d(n, 2.0), off(n - 1, -1.0);
  for (int k = 1; k <= static_cast<int>(n); ++k) {
    const double ev = 2.0 - 2.0 * std::cos(k * pi / (n + 1));
    CHECK(linalg::count_eigenvalues_below(d, off, ev - 1e-9) == k - 1);
    CHECK(linalg::count_eigenvalues_below(d, off, ev + 1e-9) == k);
  }
}

TEST_CASE("principal eigenvalue closed forms") {
  auto one = [](double) { return 1.0; };
  auto zero = [](double) { return 0.0; };
  CHECK(principal_eigenvalue_extrapolated(one, MixedBC{10.0}, 256) ==
        doctest::Approx(1.0 - pi * pi / 400.0).epsilon(1e-9));
  CHECK(principal_eigenvalue_extrapolated(zero, MixedBC{pi / 2}, 256) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(principal_eigenvalue_extrapolated(one, DirichletBC{0.0, pi}, 256)) < 1e-7);
  // The unextrapolated value carries an O(dx^2) bias.
  const double raw = principal_eigenvalue_autonomous(one, MixedBC{1.0}, 64);
  CHECK(std::abs(raw - (1.0 - pi * pi / 4.0)) > 1e-6);
  CHECK(std::abs(raw - (1.0 - pi * pi / 4.0)) < 1e-2);
  CHECK_THROWS_AS(principal_eigenvalue_autonomous(one, DirichletBC{1.0, 1.0}, 64), ConfigError);
}

TEST_CASE("eigenpair is positive") {
  auto a = [](double x) { return 1.0 + 0.3 * std::cos(x); };
  const auto ep = principal_eigenpair(a, MixedBC{3.0}, 128);
  for (double v : ep.vector) CHECK(v > 0.0);
}

TEST_CASE("spectrum interval for constant and time-periodic coefficients") {
  const double target = 1.0 - pi * pi / 400.0;
  const auto si = spectrum_interval(CoefficientField::constant(1, 1), MixedBC{10.0}, 128, 100.0, 4);
  CHECK(si.lambda_min == doctest::Approx(target).epsilon(2e-4));
  CHECK(si.lambda_max == doctest::Approx(target).epsilon(2e-4));

  // Space-independent periodic a: exponent = mean(a) + lambda(0, l).
  const auto c = CoefficientField::make(Sampler::sin_periodic(1.0, 0.5, 1.0), Sampler::constant(1.0),
                                        {0.5, 1.5, 1.0, 1.0});
  SpectrumOptions o;
  o.grid_n = 128;
  CHECK(lambda_min(c, MixedBC{10.0}, o) == doctest::Approx(target).epsilon(1e-3));
  CHECK(lambda_max(c, MixedBC{10.0}, o) == doctest::Approx(target).epsilon(1e-3));
}

TEST_CASE("monotonicity and limits") {
  const auto c = CoefficientField::constant(1, 1);
  CHECK(lambda_min(c, MixedBC{2.0}) < lambda_min(c, MixedBC{4.0}));
  CHECK(lambda_max(c, DirichletBC{0.0, 2.0}) < lambda_max(c, DirichletBC{0.0, 4.0}));
  const auto big = CoefficientField::constant(10, 1);
  CHECK(lambda_max(big, MixedBC{0.01}) < -0.9e4);
  CHECK(lambda_min(c, MixedBC{1e3}) >= 1.0 - 1e-3);
}

TEST_CASE("critical lengths") {
  const auto one = CoefficientField::constant(1, 1);
  const auto four = CoefficientField::constant(4, 1);
  const double ls1 = find_l_star(one);
  const double ls4 = find_l_star(four);
  CHECK(ls1 == doctest::Approx(pi / 2).epsilon(1e-5));
  CHECK(ls4 == doctest::Approx(pi / 4).epsilon(1e-5));
  CHECK(ls4 < ls1);
  CHECK(find_l_star_star(one) == doctest::Approx(pi).epsilon(1e-5));
  CHECK(find_l_star_star(four) == doctest::Approx(pi / 2).epsilon(1e-5));
  CHECK(find_l_star_star(one) == doctest::Approx(2.0 * ls1).epsilon(1e-5));
  CHECK(l_star_upper_bound(one) == doctest::Approx(pi / 2));
}
