// Monte-Carlo sphere sampling and the integrated flow identities: whitened
// uniform directions, deterministic reductions, standard-error scaling, and
// the capability guard for non-symmetric models.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "support.hpp"

using namespace horocurv;
using testsup::maxabs;

TEST_CASE("sphere samples are unit vectors, reproducible per index, and "
          "distinct across indices") {
  auto m = testsup::complex_hyperbolic();
  CounterRng rng(71, 0);
  const Point base = m->sample_point(rng);
  const SphereSampler sampler(*m, base, 123);
  const Mat g = metric_at(*m, base);

  for (std::uint64_t i = 0; i < 16; ++i) {
    const TangentVector v = sampler.sample(i);
    CHECK(metric_norm(g, v.v) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK((sampler.sample(5).v - sampler.sample(5).v).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((sampler.sample(5).v - sampler.sample(6).v).cwiseAbs().maxCoeff() >
        1e-3);

  const SphereSampler other(*m, base, 124);
  CHECK((sampler.sample(5).v - other.sample(5).v).cwiseAbs().maxCoeff() >
        1e-3);
}

TEST_CASE("whitened sampling has covariance g^{-1} / n") {
  auto m = testsup::hyperbolic(3, 2.0);
  CounterRng rng(72, 0);
  const Point base = m->sample_point(rng);
  const SphereSampler sampler(*m, base, 7);
  const Mat g = metric_at(*m, base);

  const int count = 40000;
  Mat cov = Mat::Zero(3, 3);
  for (int i = 0; i < count; ++i) {
    const Vec u = sampler.sample(i).v;
    cov += u * u.transpose();
  }
  cov /= count;
  const Mat expected = g.inverse() / 3.0;
  // Component-wise Monte-Carlo error is O(scale / sqrt(count)); stay at 3x.
  const double scale = maxabs(expected);
  CHECK(maxabs(cov - expected) <= 3.0 * scale / std::sqrt(double(count)) * 3.0);
}

TEST_CASE("sphere_average is deterministic bit for bit and exact on "
          "constants") {
  auto m = testsup::hyperbolic();
  const Point base = m->default_base();

  const auto c = sphere_average(*m, base, 9, 101,
                                [](const TangentVector&) { return 2.5; });
  CHECK(c.mean == 2.5);
  CHECK(c.std_error == 0.0);
  CHECK(c.count == 101);

  auto f = [](const TangentVector& v) { return v.v[0] * v.v[0]; };
  const auto a = sphere_average(*m, base, 9, 10001, f);
  const auto b = sphere_average(*m, base, 9, 10001, f);
  CHECK(a.mean == b.mean);          // bitwise
  CHECK(a.std_error == b.std_error);
  CHECK(a.std_error > 0.0);

  CHECK_THROWS_AS(sphere_average(*m, base, 9, 0, f), std::invalid_argument);
}

TEST_CASE("the standard error scales as the inverse square root of the "
          "sample count") {
  auto m = testsup::hyperbolic();
  const Point base = m->default_base();
  auto f = [](const TangentVector& v) { return v.v[0] * v.v[0]; };
  const double se3 = sphere_average(*m, base, 5, 1000, f).std_error;
  const double se4 = sphere_average(*m, base, 5, 10000, f).std_error;
  const double se5 = sphere_average(*m, base, 5, 100000, f).std_error;
  const double root10 = std::sqrt(10.0);
  CHECK(se3 / se4 > root10 / 1.5);
  CHECK(se3 / se4 < root10 * 1.5);
  CHECK(se4 / se5 > root10 / 1.5);
  CHECK(se4 / se5 < root10 * 1.5);
}

TEST_CASE("the sampled ricci mean matches Scal/n on locally symmetric "
          "models") {
  auto h3 = testsup::hyperbolic();
  const auto est = sphere_average(
      *h3, h3->default_base(), 2026, 20000,
      [&](const TangentVector& v) { return ricci(*h3, v); });
  CHECK(std::abs(est.mean - (-2.0)) <= 3.0 * est.std_error + 1e-12);

  auto ch2 = testsup::complex_hyperbolic();
  const auto est2 = sphere_average(
      *ch2, ch2->default_base(), 2026, 20000,
      [&](const TangentVector& v) { return ricci(*ch2, v); });
  CHECK(std::abs(est2.mean - (-6.0)) <= 3.0 * est2.std_error + 1e-12);
}

TEST_CASE("integrated identity: mean trace(S^2) equals -Scal/n on the "
          "locally symmetric models") {
  RiccatiConfig cfg;
  cfg.horizon = 20.0;

  auto h3 = testsup::hyperbolic();
  CHECK(verify_integrated_identity(*h3, h3->default_base(), 11, 50, cfg) <=
        1e-6);

  auto h4 = testsup::hyperbolic(4, 2.0);
  RiccatiConfig cfg4;
  cfg4.horizon = 10.0;
  CHECK(verify_integrated_identity(*h4, h4->default_base(), 11, 30, cfg4) <=
        1e-5);

  auto ch2 = testsup::complex_hyperbolic();
  RiccatiConfig cfgc;
  cfgc.horizon = chart_safe_horizon(*ch2, 30.0);
  CHECK(verify_integrated_identity(*ch2, ch2->default_base(), 11, 20, cfgc) <=
        1e-3);

  auto flat = testsup::perturbed(0.0);
  CHECK(verify_integrated_identity(*flat, flat->default_base(), 11, 20, cfg) <=
        1e-6);
}

TEST_CASE("the integrated identity refuses models without constant "
          "integrands") {
  auto m = testsup::perturbed(0.05);
  RiccatiConfig cfg;
  CHECK_THROWS_AS(
      verify_integrated_identity(*m, m->default_base(), 11, 4, cfg),
      CapabilityError);
}

TEST_CASE("the flow derivative of trace S vanishes along converged stable "
          "solutions on symmetric models") {
  auto m = testsup::hyperbolic();
  const TangentVector v = testsup::unit_direction(*m, 73);
  RiccatiConfig cfg;
  cfg.horizon = 20.0;
  const RiccatiRun run = stable_shape_operator(*m, v, cfg);
  CHECK(flow_derivative_check(run) <= 1e-8);
}

TEST_CASE("pairwise_sum is a faithful, deterministic reduction") {
  CounterRng rng(74, 0);
  std::vector<double> values(1537);
  long double naive = 0.0L;
  for (double& x : values) {
    x = rng.next_gaussian();
    naive += static_cast<long double>(x);
  }
  const double a = pairwise_sum(values);
  const double b = pairwise_sum(values);
  CHECK(a == b);
  CHECK(std::abs(a - static_cast<double>(naive)) <= 1e-10);
  CHECK(pairwise_sum({}) == 0.0);
  CHECK(pairwise_sum({3.25}) == 3.25);
}
