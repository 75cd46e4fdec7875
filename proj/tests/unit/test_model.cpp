#include <doctest.h>

#include <random>

#include "chemofront/errors.hpp"
#include "chemofront/model.hpp"

using namespace chemofront;

namespace {
ModelParams params(double chi1, double chi2, double mu1, double mu2, double l1 = 1.0, double l2 = 1.0) {
  ModelParams p;
  p.chi1 = chi1;
  p.chi2 = chi2;
  p.mu1 = mu1;
  p.mu2 = mu2;
  p.lambda1 = l1;
  p.lambda2 = l2;
  return p;
}
}  // namespace

TEST_CASE("M and K examples") {
  CHECK(compute_M(params(2, 0, 3, 0)) == doctest::Approx(0.0));
  CHECK(compute_K(params(2, 0, 3, 0)) == doctest::Approx(6.0));
  CHECK(compute_M(params(0, 2, 0, 3)) == doctest::Approx(6.0));
  CHECK(compute_K(params(0, 2, 0, 3)) == doctest::Approx(6.0));
  CHECK(compute_M(params(1, 1, 1, 1)) == doctest::Approx(0.0));
  CHECK(compute_K(params(0, 0, 0, 0)) == doctest::Approx(0.0));
}

TEST_CASE("M0 and m0 examples") {
  const auto one = CoefficientField::constant(1, 1);
  CHECK(compute_M0(params(0, 0, 0, 0), one) == doctest::Approx(1.0));
  CHECK(compute_M0(params(0, 0, 0, 0), CoefficientField::constant(2, 1)) == doctest::Approx(2.0));
  CHECK(compute_M0(params(0, 1, 0, 1), one) == doctest::Approx(1.0));
  CHECK(compute_m0(params(0, 0, 0, 0), one) == doctest::Approx(1.0));
  CHECK(compute_m0(params(0, 0, 0, 0), CoefficientField::constant(2, 1)) == doctest::Approx(2.0));
  // chi2 mu2 = M cancels in the first two factors but not in b_sup + chi2 mu2 - chi1 mu1,
  // so m0 = 1 / (1 + 1).
  CHECK(compute_m0(params(0, 1, 0, 1), one) == doctest::Approx(0.5));
}

TEST_CASE("hypothesis examples") {
  auto r = check_hypotheses(params(0, 0, 0, 0), CoefficientField::constant(1, 1));
  CHECK(r.h1_holds);
  CHECK(r.h2_holds);
  CHECK(r.h3_holds);

  r = check_hypotheses(params(1, 0, 1, 0), CoefficientField::constant(1, 1.5));
  CHECK(r.h1_holds);
  CHECK_FALSE(r.h3_holds);
  CHECK(r.h1_margin == doctest::Approx(0.5));

  r = check_hypotheses(params(1, 0, 1, 0), CoefficientField::constant(1, 0.5));
  CHECK_FALSE(r.h1_holds);
  CHECK_FALSE(r.M0_valid);
  CHECK_THROWS_AS(compute_M0(params(1, 0, 1, 0), CoefficientField::constant(1, 0.5)), HypothesisViolation);
  CHECK_THROWS_AS(compute_m0(params(1, 0, 1, 0), CoefficientField::constant(1, 0.5)), HypothesisViolation);
}

TEST_CASE("model invariants on random parameters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 3.0), L(0.1, 3.0);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p = params(U(rng), U(rng), U(rng), U(rng), L(rng), L(rng));
    const double M = compute_M(p);
    CHECK(M <= p.chi2 * p.mu2 + 1e-12);
    CHECK(M <= compute_K(p) + 1e-12);
    // Degree-1 homogeneity in (chi1 mu1, chi2 mu2).
    ModelParams q = p;
    q.mu1 *= 2.5;
    q.mu2 *= 2.5;
    CHECK(compute_M(q) == doctest::Approx(2.5 * M));
    CHECK(compute_K(q) == doctest::Approx(2.5 * compute_K(p)));

    const double a = 0.5 + U(rng), b = 0.2 + U(rng);
    const auto c = CoefficientField::constant(a, b);
    const auto r = check_hypotheses(p, c);
    if (r.h2_holds) {
      CHECK(r.h1_holds);
      CHECK(compute_m0(p, c) > 0.0);
    }
    if (r.h3_holds) CHECK(r.h1_holds);
  }
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.lambda1 = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ModelParams{};
  p.chi1 = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ModelParams{};
  p.nu = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("coefficient fields") {
  CHECK_THROWS_AS(CoefficientField::constant(0.0, 1.0), HypothesisViolation);
  const auto c = CoefficientField::make(Sampler::sin_periodic(1.0, 0.5, 1.0), Sampler::constant(1.0),
                                        {0.5, 1.5, 1.0, 1.0});
  CHECK(c.kind() == CoefficientKind::TimeOnly);
  CHECK(c.a(0.25, 3.0) == doctest::Approx(1.5));
  CHECK_FALSE(c.a_sampler().constant_value().has_value());
  // Declared bounds that the sampler violates, or never approaches.
  CHECK_THROWS_AS(CoefficientField::make(Sampler::sin_periodic(1.0, 0.5, 1.0), Sampler::constant(1.0),
                                         {0.6, 1.5, 1.0, 1.0}),
                  ConfigError);
  CHECK_THROWS_AS(CoefficientField::make(Sampler::sin_periodic(1.0, 0.5, 1.0), Sampler::constant(1.0),
                                         {0.1, 1.5, 1.0, 1.0}),
                  ConfigError);
  const auto sx = CoefficientField::make(Sampler::cos_space(1.0, 0.2, 5.0), Sampler::constant(1.0),
                                         {0.8, 1.2, 1.0, 1.0});
  CHECK(sx.kind() == CoefficientKind::SpaceTime);
  CHECK(sx.a(0.0, 2.5) == doctest::Approx(0.8));
}

TEST_CASE("tabulated sampler") {
  const auto s = Sampler::tabulated({0.0, 0.5}, {0.0, 1.0}, {1.0, 2.0, 3.0, 4.0}, 1.0);
  CHECK(s(0.0, 0.5) == doctest::Approx(1.5));
  CHECK(s(0.25, 0.0) == doctest::Approx(2.0));
  CHECK(s(1.0, 1.0) == doctest::Approx(2.0));  // wraps in t
  CHECK(s(0.0, 5.0) == doctest::Approx(2.0));  // clamped in x
  CHECK_THROWS_AS(Sampler::tabulated({0.0}, {0.0, 1.0}, {1.0}, 1.0), ConfigError);
}
