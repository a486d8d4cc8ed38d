// Model geometries: metric and Christoffel data, curvature tensors in both
// backends, algebraic curvature identities, and registry validation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "support.hpp"

using namespace horocurv;
using testsup::maxabs;
using testsup::vec3;
using testsup::vec4;

TEST_CASE("half-space metric is Euclidean at unit height and scales as the "
          "inverse squared height") {
  auto m = testsup::hyperbolic();
  const Point p(vec3(0.0, 0.0, 1.0));
  CHECK(maxabs(metric_at(*m, p) - Mat::Identity(3, 3)) <= 1e-15);

  auto m2 = testsup::hyperbolic(3, 2.0);
  CHECK(maxabs(metric_at(*m2, p) - 0.25 * Mat::Identity(3, 3)) <= 1e-15);

  const Point q(vec3(0.4, -1.0, 2.0));
  CHECK(maxabs(metric_at(*m, q) - 0.25 * Mat::Identity(3, 3)) <= 1e-15);
}

TEST_CASE("metric tensors are symmetric positive definite across the "
          "sampling box") {
  for (auto model : {testsup::hyperbolic(4, 1.5), testsup::complex_hyperbolic(),
                     testsup::perturbed(0.05)}) {
    CounterRng rng(11, 0);
    for (int i = 0; i < 32; ++i) {
      const Point p = model->sample_point(rng);
      const Mat g = metric_at(*model, p);
      CHECK(maxabs(g - g.transpose()) <= 1e-14);
      Eigen::SelfAdjointEigenSolver<Mat> es(g);
      CHECK(es.eigenvalues()(0) > 0.0);
    }
  }
}

TEST_CASE("christoffel symbols are symmetric in the lower indices") {
  for (auto model : {testsup::hyperbolic(), testsup::complex_hyperbolic(),
                     testsup::perturbed(0.05)}) {
    CounterRng rng(12, 0);
    const Point p = model->sample_point(rng);
    const Tensor3 gamma = christoffel_at(*model, p);
    const int n = model->dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          CHECK(gamma(i, j, k) == doctest::Approx(gamma(i, k, j)).epsilon(1e-12));
  }
}

TEST_CASE("hyperbolic space has constant sectional curvature -k^2") {
  for (double k : {1.0, 2.0}) {
    auto m = testsup::hyperbolic(4, k);
    CounterRng rng(13, 0);
    for (int i = 0; i < 16; ++i) {
      const Point p = m->sample_point(rng);
      Vec u(4), w(4);
      for (int a = 0; a < 4; ++a) {
        u[a] = rng.next_gaussian();
        w[a] = rng.next_gaussian();
      }
      CHECK(sectional_curvature(*m, p, u, w) ==
            doctest::Approx(-k * k).epsilon(1e-8));
    }
  }
}

TEST_CASE("complex hyperbolic sectional curvature is -4 on holomorphic "
          "planes, -1 on totally real planes, and pinched in between") {
  auto m = testsup::complex_hyperbolic();
  CounterRng rng(14, 0);
  for (int i = 0; i < 8; ++i) {
    const Point p = m->sample_point(rng);
    const Mat J = m->complex_structure(p);
    Vec raw(4);
    for (int a = 0; a < 4; ++a) raw[a] = rng.next_gaussian();
    const TangentVector v = unit_vector(*m, p, raw);

    // Holomorphic plane span{v, Jv}.
    CHECK(sectional_curvature(*m, p, v.v, J * v.v) ==
          doctest::Approx(-4.0).epsilon(1e-10));

    // A totally real plane: w orthogonal to both v and Jv.
    const Mat g = metric_at(*m, p);
    auto frame = gram_schmidt(g, {v.v, J * v.v}, {vec4(1, 0, 0, 0),
                                                  vec4(0, 1, 0, 0),
                                                  vec4(0, 0, 1, 0),
                                                  vec4(0, 0, 0, 1)});
    REQUIRE(frame.size() == 2);
    CHECK(sectional_curvature(*m, p, v.v, frame[0]) ==
          doctest::Approx(-1.0).epsilon(1e-10));

    // Generic planes stay within the pinching interval.
    Vec raw2(4);
    for (int a = 0; a < 4; ++a) raw2[a] = rng.next_gaussian();
    const double kappa = sectional_curvature(*m, p, v.v, raw2);
    CHECK(kappa <= -1.0 + 1e-10);
    CHECK(kappa >= -4.0 - 1e-10);
  }
}

TEST_CASE("complex hyperbolic curvature operator has eigenvalues -4, -1, -1 "
          "and the adapted frame diagonalizes it") {
  auto m = testsup::complex_hyperbolic();
  const TangentVector v = testsup::unit_direction(*m, 5);
  const auto frame = seed_frame(*m, v, /*adapted=*/true);
  const Mat op = curvature_operator(*m, v, frame);

  Eigen::SelfAdjointEigenSolver<Mat> es(op);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-4.0).epsilon(1e-10));
  CHECK(es.eigenvalues()(1) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(es.eigenvalues()(2) == doctest::Approx(-1.0).epsilon(1e-10));

  // Adapted frame seeds Jv first, which spans the holomorphic direction.
  Mat expected = -Mat::Identity(3, 3);
  expected(0, 0) = -4.0;
  CHECK(maxabs(op - expected) <= 1e-10);
}

TEST_CASE("ricci and scalar curvature match the constant-curvature formulas") {
  for (auto [dim, k] : {std::pair{3, 1.0}, std::pair{4, 2.0}}) {
    auto m = testsup::hyperbolic(dim, k);
    const TangentVector v = testsup::unit_direction(*m, 21);
    const auto [ric, scal] = ricci_and_scalar(*m, v);
    CHECK(ric == doctest::Approx(-(dim - 1) * k * k).epsilon(1e-10));
    CHECK(scal == doctest::Approx(-dim * (dim - 1) * k * k).epsilon(1e-10));
  }

  auto ch2 = testsup::complex_hyperbolic();
  const TangentVector v = testsup::unit_direction(*ch2, 22);
  const auto [ric, scal] = ricci_and_scalar(*ch2, v);
  CHECK(ric == doctest::Approx(-6.0).epsilon(1e-10));
  CHECK(scal == doctest::Approx(-24.0).epsilon(1e-10));
}

TEST_CASE("riemann tensor satisfies the algebraic symmetries and the first "
          "Bianchi identity in both curvature backends") {
  auto closed = testsup::complex_hyperbolic();
  auto fd = testsup::perturbed(0.05);  // finite differences by construction
  for (const Model* m : {closed.get(), fd.get()}) {
    const double tol = m->curvature_mode() == CurvatureMode::kClosedForm
                           ? 1e-10
                           : 1e-6;
    CounterRng rng(15, 0);
    const Point p = m->sample_point(rng);
    const Mat g = metric_at(*m, p);
    const int n = m->dim();
    Vec u(n), v(n), w(n), z(n);
    for (int a = 0; a < n; ++a) {
      u[a] = rng.next_gaussian();
      v[a] = rng.next_gaussian();
      w[a] = rng.next_gaussian();
      z[a] = rng.next_gaussian();
    }

    const Vec bianchi = riemann_at(*m, p, u, v, w) + riemann_at(*m, p, v, w, u) +
                        riemann_at(*m, p, w, u, v);
    CHECK(bianchi.cwiseAbs().maxCoeff() <= tol);

    const double ruvwz = metric_inner(g, riemann_at(*m, p, u, v, w), z);
    const double rvuwz = metric_inner(g, riemann_at(*m, p, v, u, w), z);
    const double rwzuv = metric_inner(g, riemann_at(*m, p, w, z, u), v);
    CHECK(ruvwz == doctest::Approx(-rvuwz).epsilon(tol).scale(1.0));
    CHECK(ruvwz == doctest::Approx(rwzuv).epsilon(tol).scale(1.0));
  }
}

TEST_CASE("zero-amplitude perturbation reproduces the hyperbolic geometry") {
  auto base = testsup::hyperbolic();
  auto pert = testsup::perturbed(0.0);
  CounterRng rng(16, 0);
  for (int i = 0; i < 16; ++i) {
    const Point p = base->sample_point(rng);
    CHECK(maxabs(metric_at(*base, p) - metric_at(*pert, p)) <= 1e-8);

    Vec u(3), v(3), w(3);
    for (int a = 0; a < 3; ++a) {
      u[a] = rng.next_gaussian();
      v[a] = rng.next_gaussian();
      w[a] = rng.next_gaussian();
    }
    CHECK((riemann_at(*base, p, u, v, w) - riemann_at(*pert, p, u, v, w))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
  }
}

TEST_CASE("perturbed curvature departs from constant curvature inside the "
          "bump and matches it far away") {
  auto m = testsup::perturbed(0.05);
  auto h = testsup::hyperbolic();

  // Far from the bump support the geometry is exactly hyperbolic.
  const Point far(vec3(10.0, 10.0, 1.0));
  Vec u = vec3(1, 0, 0), v = vec3(0, 1, 0), w = vec3(0, 0, 1);
  CHECK((riemann_at(*m, far, u, v, w) - riemann_at(*h, far, u, v, w))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  // Near the bump center the sectional curvature genuinely varies.
  const TangentVector dir = testsup::unit_direction(*m, 3);
  const Point inside(m->default_base());
  double kmin = 0.0, kmax = -10.0;
  CounterRng rng(17, 0);
  for (int i = 0; i < 24; ++i) {
    Vec a(3), b(3);
    for (int c = 0; c < 3; ++c) {
      a[c] = rng.next_gaussian();
      b[c] = rng.next_gaussian();
    }
    Vec off = inside.x + 0.3 * a.normalized();
    if (!m->in_domain(Point(off))) continue;
    const double kappa = sectional_curvature(*m, Point(off), a, b);
    kmin = std::min(kmin, kappa);
    kmax = std::max(kmax, kappa);
    CHECK(kappa < 0.0);  // registration guarantees strict negativity
  }
  CHECK(kmax - kmin > 1e-4);
}

TEST_CASE("unit_vector normalizes to unit metric norm and rejects the zero "
          "vector") {
  auto m = testsup::complex_hyperbolic();
  CounterRng rng(18, 0);
  const Point p = m->sample_point(rng);
  const TangentVector v = unit_vector(*m, p, vec4(0.3, -2.0, 0.7, 0.1));
  CHECK(metric_norm(metric_at(*m, p), v.v) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(unit_vector(*m, p, Vec::Zero(4)), std::invalid_argument);
}

TEST_CASE("seed_frame completes a unit vector to an orthonormal frame of its "
          "orthogonal complement") {
  for (auto model : {testsup::hyperbolic(5, 1.3), testsup::complex_hyperbolic()}) {
    const TangentVector v = testsup::unit_direction(*model, 19);
    const auto frame = seed_frame(*model, v);
    REQUIRE(static_cast<int>(frame.size()) == model->dim() - 1);
    const Mat g = metric_at(*model, v.base);
    std::vector<Vec> all = {v.v};
    all.insert(all.end(), frame.begin(), frame.end());
    const Mat gram = gram_matrix(g, all);
    CHECK(maxabs(gram - Mat::Identity(model->dim(), model->dim())) <= 1e-12);
  }
}

TEST_CASE("adapted seed_frame on the complex hyperbolic plane puts Jv first") {
  auto m = testsup::complex_hyperbolic();
  const TangentVector v = testsup::unit_direction(*m, 20);
  const auto frame = seed_frame(*m, v, /*adapted=*/true);
  const Mat g = metric_at(*m, v.base);
  const Vec jv = m->complex_structure(v.base) * v.v;
  CHECK(std::abs(std::abs(metric_inner(g, frame[0], jv)) - 1.0) <= 1e-10);
}

TEST_CASE("curvature_operator validates frame orthonormality") {
  auto m = testsup::hyperbolic();
  const TangentVector v = testsup::unit_direction(*m, 23);
  auto frame = seed_frame(*m, v);
  frame[0] *= 2.0;
  CHECK_THROWS_AS(curvature_operator(*m, v, frame), std::invalid_argument);
}

TEST_CASE("domain checks reject points outside the chart") {
  auto h = testsup::hyperbolic();
  CHECK_THROWS_AS(metric_at(*h, Point(vec3(0, 0, -1.0))), std::domain_error);
  CHECK_THROWS_AS(metric_at(*h, Point(vec3(0, 0, 0.0))), std::domain_error);
  auto c = testsup::complex_hyperbolic();
  CHECK_THROWS_AS(metric_at(*c, Point(vec4(1, 0, 0, 0))), std::domain_error);
  CHECK(c->in_domain(Point(vec4(0.9999, 0, 0, 0))));
}

TEST_CASE("closed-form and finite-difference curvature agree on hyperbolic "
          "space") {
  ModelParams pc;
  pc.dim = 3;
  ModelParams pf = pc;
  pf.curvature_mode = CurvatureMode::kFiniteDifference;
  auto closed = make_model("hyperbolic", pc);
  auto fd = make_model("hyperbolic", pf);
  CounterRng rng(24, 0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Point p = closed->sample_point(rng);
    Vec raw(3);
    for (int a = 0; a < 3; ++a) raw[a] = rng.next_gaussian();
    const TangentVector v = unit_vector(*closed, p, raw);
    const auto frame = seed_frame(*closed, v);
    worst = std::max(worst, maxabs(curvature_operator(*closed, v, frame) -
                                   curvature_operator(*fd, v, frame)));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("the registry rejects invalid parameters and unknown names") {
  CHECK_THROWS_AS(make_model("euclidean", {}), std::invalid_argument);

  ModelParams bad_dim;
  bad_dim.dim = 2;
  CHECK_THROWS_AS(make_model("hyperbolic", bad_dim), std::invalid_argument);

  ModelParams bad_k;
  bad_k.k = 0.0;
  CHECK_THROWS_AS(make_model("hyperbolic", bad_k), std::invalid_argument);

  ModelParams ch2_dim;
  ch2_dim.dim = 5;
  CHECK_THROWS_AS(make_model("complex-hyperbolic", ch2_dim),
                  std::invalid_argument);

  ModelParams closed_pert;
  closed_pert.amplitude = 0.1;
  closed_pert.curvature_mode = CurvatureMode::kClosedForm;
  CHECK_THROWS_AS(make_model("perturbed", closed_pert), std::invalid_argument);

  ModelParams no_samples;
  no_samples.validation_samples = 0;
  CHECK_THROWS_AS(make_model("hyperbolic", no_samples), std::invalid_argument);
}

TEST_CASE("registration rejects perturbations strong enough to break "
          "negative curvature") {
  ModelParams violent;
  violent.amplitude = 5.0;
  CHECK_THROWS_AS(make_model("perturbed", violent), std::runtime_error);
}

TEST_CASE("model metadata: names, curvature bounds, parameter echo") {
  const auto names = model_names();
  REQUIRE(names.size() == 3);
  CHECK(names[0] == "hyperbolic");
  CHECK(names[1] == "complex-hyperbolic");
  CHECK(names[2] == "perturbed");

  CHECK(testsup::hyperbolic(3, 2.0)->max_abs_curvature() ==
        doctest::Approx(4.0));
  CHECK(testsup::complex_hyperbolic()->max_abs_curvature() ==
        doctest::Approx(4.0));
  CHECK(testsup::perturbed(0.05)->max_abs_curvature() >= 1.0);

  auto m = testsup::hyperbolic();
  CHECK(m->parameters().contains("k"));
  CHECK(m->locally_symmetric());
  CHECK(!testsup::perturbed(0.05)->locally_symmetric());
  CHECK(testsup::perturbed(0.0)->locally_symmetric());
}
