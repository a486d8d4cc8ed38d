// models.cpp - the shipped model geometries (real hyperbolic half-space,
// complex hyperbolic plane, conformally perturbed half-space) and the
// validating registry that builds them.

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "horocurv/errors.hpp"
#include "horocurv/finite_diff.hpp"
#include "horocurv/model.hpp"

namespace horocurv {
namespace {

using cplx = std::complex<double>;

// ---- real hyperbolic half-space -------------------------------------------
//
// Chart {x in R^n : x_n > 0}, metric g = delta / (k x_n)^2, constant sectional
// curvature -k^2. The vertical unit-speed geodesic through x_n = 1 is
// x_n(t) = exp(k t).
class HyperbolicModel : public Model {
 public:
  HyperbolicModel(int n, double k, CurvatureMode mode)
      : Model("hyperbolic", n, mode), k_(k) {
    set_max_abs_curvature(k * k);
  }

  bool locally_symmetric() const override { return true; }
  bool has_closed_form_curvature() const override { return true; }

  // Strictly positive height: backward geodesic flow drives x_n toward zero
  // exponentially, and every formula here stays exact at any positive height.
  bool in_domain(const Point& p) const override {
    return p.x[dim() - 1] > 0.0;
  }

  Mat metric(const Point& p) const override {
    const double h = p.x[dim() - 1];
    return Mat::Identity(dim(), dim()) / (k_ * k_ * h * h);
  }

  // Conformal-to-flat metric e^{2 phi} delta with phi = -log(k x_n):
  // Gamma^i_{jk} = -(d^i_j d_{kn} + d^i_k d_{jn} - d_{jk} d_{in}) / x_n.
  Tensor3 christoffel(const Point& p) const override {
    const int n = dim();
    const double inv_h = 1.0 / p.x[n - 1];
    Tensor3 gamma(n);
    const int last = n - 1;
    for (int i = 0; i < n; ++i) {
      gamma(i, i, last) = -inv_h;
      gamma(i, last, i) = -inv_h;
    }
    gamma(last, last, last) = -inv_h;
    for (int j = 0; j < last; ++j) gamma(last, j, j) = inv_h;
    return gamma;
  }

  // Constant curvature: R(u,v)w = -k^2 (g(v,w) u - g(u,w) v).
  Vec riemann_closed_form(const Point& p, const Vec& u, const Vec& v,
                          const Vec& w) const override {
    const Mat g = metric(p);
    return -k_ * k_ * (metric_inner(g, v, w) * u - metric_inner(g, u, w) * v);
  }

  nlohmann::json parameters() const override {
    return {{"k", k_}, {"sectional_curvature", -k_ * k_}};
  }

  Point sample_point(CounterRng& rng) const override {
    Vec x(dim());
    for (int a = 0; a + 1 < dim(); ++a) x[a] = -2.0 + 4.0 * rng.next_double();
    x[dim() - 1] = 0.25 + 3.75 * rng.next_double();
    return Point(x);
  }

  Point default_base() const override {
    Vec x = Vec::Zero(dim());
    x[dim() - 1] = 1.0;
    return Point(x);
  }

  double k() const { return k_; }

 private:
  double k_;
};

// ---- complex hyperbolic plane ---------------------------------------------
//
// Unit ball in C^2 with real coordinates (x1, y1, x2, y2), z_j = x_j + i y_j.
// Hermitian metric h_{i jbar} = (d_{ij} A + zbar_i z_j) / A^2, A = 1 - |z|^2;
// real metric g(X, Y) = Re sum h_{i jbar} X^i conj(Y^j). Holomorphic
// sectional curvature -4, real sectional curvature K = -1 - 3 <Ju, w>^2 in
// [-4, -1].
class ComplexHyperbolicModel : public Model {
 public:
  explicit ComplexHyperbolicModel(CurvatureMode mode)
      : Model("complex-hyperbolic", 4, mode) {
    set_max_abs_curvature(4.0);
  }

  bool locally_symmetric() const override { return true; }
  bool has_closed_form_curvature() const override { return true; }
  bool has_complex_structure() const override { return true; }

  // Strict open ball: geodesics approach the sphere at infinity like
  // 1 - r ~ e^{-2t}, so no fixed collar is admissible.
  bool in_domain(const Point& p) const override {
    return p.x.squaredNorm() < 1.0;
  }

  // 1 - r ~ 2 e^{-2t} falls to a few hundred ulps of 1 near t = 17, beyond
  // which the chart cannot represent the boundary approach.
  double max_chart_time() const override { return 16.0; }

  Mat metric(const Point& p) const override {
    const cplx z1(p.x[0], p.x[1]), z2(p.x[2], p.x[3]);
    const double A = 1.0 - std::norm(z1) - std::norm(z2);
    const double inv_A2 = 1.0 / (A * A);
    const cplx z[2] = {z1, z2};
    Mat g(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const cplx h =
            ((i == j ? A : 0.0) + std::conj(z[i]) * z[j]) * inv_A2;
        g(2 * i, 2 * j) = h.real();
        g(2 * i, 2 * j + 1) = h.imag();
        g(2 * i + 1, 2 * j) = -h.imag();
        g(2 * i + 1, 2 * j + 1) = h.real();
      }
    return g;
  }

  // Kahler Christoffels: complex Gamma^k_{ij} = (d^k_i zbar_j + d^k_j zbar_i)/A,
  // mapped to real coordinates through nabla_{dx_i} dx_j = Re(Gc) dx_k
  // + Im(Gc) dy_k and its J-rotations.
  Tensor3 christoffel(const Point& p) const override {
    const cplx z[2] = {cplx(p.x[0], p.x[1]), cplx(p.x[2], p.x[3])};
    const double A = 1.0 - std::norm(z[0]) - std::norm(z[1]);
    Tensor3 gamma(4);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const cplx gc = ((k == i ? std::conj(z[j]) : cplx(0.0)) +
                           (k == j ? std::conj(z[i]) : cplx(0.0))) /
                          A;
          const double re = gc.real(), im = gc.imag();
          const int xk = 2 * k, yk = 2 * k + 1;
          const int xi = 2 * i, yi = 2 * i + 1;
          const int xj = 2 * j, yj = 2 * j + 1;
          gamma(xk, xi, xj) = re;
          gamma(yk, xi, xj) = im;
          gamma(xk, xi, yj) = -im;
          gamma(yk, xi, yj) = re;
          gamma(xk, yi, xj) = -im;
          gamma(yk, yi, xj) = re;
          gamma(xk, yi, yj) = -re;
          gamma(yk, yi, yj) = -im;
        }
    return gamma;
  }

  Mat complex_structure(const Point&) const override {
    Mat J = Mat::Zero(4, 4);
    for (int i = 0; i < 2; ++i) {
      J(2 * i + 1, 2 * i) = 1.0;   // J dx_i = dy_i
      J(2 * i, 2 * i + 1) = -1.0;  // J dy_i = -dx_i
    }
    return J;
  }

  // Constant holomorphic curvature c = -4:
  // R(u,v)w = (c/4)[g(v,w)u - g(u,w)v + g(Jv,w)Ju - g(Ju,w)Jv - 2g(Ju,v)Jw].
  Vec riemann_closed_form(const Point& p, const Vec& u, const Vec& v,
                          const Vec& w) const override {
    const Mat g = metric(p);
    const Mat J = complex_structure(p);
    const Vec ju = J * u, jv = J * v, jw = J * w;
    return -(metric_inner(g, v, w) * u - metric_inner(g, u, w) * v +
             metric_inner(g, jv, w) * ju - metric_inner(g, ju, w) * jv -
             2.0 * metric_inner(g, ju, v) * jw);
  }

  nlohmann::json parameters() const override {
    return {{"holomorphic_curvature", -4.0},
            {"sectional_curvature_range", {-4.0, -1.0}}};
  }

  Point sample_point(CounterRng& rng) const override {
    // Rejection sampling inside the radius-0.75 ball keeps all finite
    // difference stencils comfortably inside the chart.
    while (true) {
      Vec x(4);
      for (int a = 0; a < 4; ++a) x[a] = -0.75 + 1.5 * rng.next_double();
      if (x.norm() <= 0.75) return Point(x);
    }
  }

  Point default_base() const override { return Point(Vec::Zero(4)); }
};

// ---- conformally perturbed half-space --------------------------------------
//
// g = e^{2 eps phi} g_hyp with a fixed smooth compactly supported bump
//   phi(x) = s0 exp(1 - 1/(1 - q)),  q = |x - c|^2 / rho^2 < 1,
// centered at c = (0,...,0,1). The composite metric is still conformal to the
// flat chart metric, so the Christoffel symbols stay closed-form; the
// curvature tensor is evaluated by finite differences inside the bump support
// and by the exact unperturbed tensor outside it.
class PerturbedModel : public Model {
 public:
  static constexpr double kBumpRadius = 0.75;
  static constexpr double kBumpScale = 0.15;

  PerturbedModel(int n, double k, double amplitude, CurvatureMode mode)
      : Model("perturbed", n, mode), base_(n, k, CurvatureMode::kClosedForm),
        amplitude_(amplitude) {
    center_ = Vec::Zero(n);
    center_[n - 1] = 1.0;
    set_max_abs_curvature(k * k);  // registration tightens this from samples
  }

  bool locally_symmetric() const override { return amplitude_ == 0.0; }
  bool has_closed_form_curvature() const override { return amplitude_ == 0.0; }

  bool in_domain(const Point& p) const override { return base_.in_domain(p); }

  double bump(const Point& p) const {
    const double q = (p.x - center_).squaredNorm() / (kBumpRadius * kBumpRadius);
    if (q >= 1.0) return 0.0;
    return kBumpScale * std::exp(1.0 - 1.0 / (1.0 - q));
  }

  Vec bump_gradient(const Point& p) const {
    const Vec d = p.x - center_;
    const double q = d.squaredNorm() / (kBumpRadius * kBumpRadius);
    if (q >= 1.0) return Vec::Zero(dim());
    const double phi = kBumpScale * std::exp(1.0 - 1.0 / (1.0 - q));
    // d phi / d q = -phi / (1-q)^2 ; d q / d x_i = 2 d_i / rho^2.
    const double dq = -phi / ((1.0 - q) * (1.0 - q));
    return dq * (2.0 / (kBumpRadius * kBumpRadius)) * d;
  }

  Mat metric(const Point& p) const override {
    return std::exp(2.0 * amplitude_ * bump(p)) * base_.metric(p);
  }

  // Conformal change on a conformally flat base: with u = eps phi,
  // Gamma^i_{jk} = Gamma_hyp^i_{jk} + d^i_j u_k + d^i_k u_j - d_{jk} u_i.
  Tensor3 christoffel(const Point& p) const override {
    Tensor3 gamma = base_.christoffel(p);
    if (amplitude_ == 0.0) return gamma;
    const Vec u = amplitude_ * bump_gradient(p);
    const int n = dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        gamma(i, i, j) += u[j];
        gamma(i, j, i) += u[j];
        gamma(i, j, j) -= u[i];
      }
    return gamma;
  }

  Vec riemann_closed_form(const Point& p, const Vec& u, const Vec& v,
                          const Vec& w) const override {
    if (amplitude_ != 0.0)
      throw std::logic_error(
          "perturbed model has closed-form curvature only at amplitude 0");
    return base_.riemann_closed_form(p, u, v, w);
  }

 protected:
  // The bump is compactly supported: wherever the whole difference stencil
  // sits outside the support the metric coincides with the unperturbed one,
  // so the exact constant-curvature tensor applies. This also keeps long
  // trajectory tails (x_n -> 0) clear of stencils that would leave the chart.
  Vec riemann_finite_difference(const Point& p, const Vec& u, const Vec& v,
                                const Vec& w) const override {
    const double reach = kBumpRadius + 2.0 * fd::kSecondOrderStep;
    if ((p.x - center_).squaredNorm() >= reach * reach)
      return base_.riemann_closed_form(p, u, v, w);
    return Model::riemann_finite_difference(p, u, v, w);
  }

 public:

  nlohmann::json parameters() const override {
    return {{"k", base_.k()},
            {"amplitude", amplitude_},
            {"bump_radius", kBumpRadius},
            {"bump_scale", kBumpScale},
            {"bump_center_height", 1.0}};
  }

  Point sample_point(CounterRng& rng) const override {
    // Half the samples inside the bump support, half across the general box.
    if (rng.next_double() < 0.5) {
      while (true) {
        Vec d(dim());
        for (int a = 0; a < dim(); ++a)
          d[a] = -kBumpRadius + 2.0 * kBumpRadius * rng.next_double();
        if (d.norm() <= 0.95 * kBumpRadius) {
          Point p(center_ + d);
          if (in_domain(p)) return p;
        }
      }
    }
    return base_.sample_point(rng);
  }

  Point default_base() const override { return base_.default_base(); }

  double amplitude() const { return amplitude_; }
  void set_curvature_bound(double value) { set_max_abs_curvature(value); }

 private:
  HyperbolicModel base_;
  double amplitude_;
  Vec center_;
};

// ---- registration validation ------------------------------------------------

void validate_model(const Model& model, int samples, std::uint64_t seed,
                    double* max_abs_K_out) {
  CounterRng rng(seed, 0);
  const int n = model.dim();
  const bool fd_mode = model.curvature_mode() == CurvatureMode::kFiniteDifference;
  const double sym_tol = fd_mode ? 1e-5 : 1e-9;
  double max_abs_K = 0.0;

  for (int s = 0; s < samples; ++s) {
    const Point p = model.sample_point(rng);

    // Metric must be symmetric positive definite.
    const Mat g = model.metric(p);
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::runtime_error("registration: metric not symmetric at a sample");
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "registration: metric not positive definite at a sample");

    // Curvature tensor symmetries on a random 4-tuple: antisymmetry in the
    // first pair and symmetry under pair exchange.
    Vec a(n), b(n), c(n), d(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.next_gaussian();
      b[i] = rng.next_gaussian();
      c[i] = rng.next_gaussian();
      d[i] = rng.next_gaussian();
    }
    const auto R4 = [&](const Vec& x, const Vec& y, const Vec& z,
                        const Vec& t) {
      return metric_inner(g, model.riemann(p, x, y, z), t);
    };
    const double r_abcd = R4(a, b, c, d);
    const double scale = 1.0 + std::abs(r_abcd);
    if (std::abs(r_abcd + R4(b, a, c, d)) > sym_tol * scale)
      throw std::runtime_error(
          "registration: curvature tensor not antisymmetric in the first pair");
    if (std::abs(r_abcd - R4(c, d, a, b)) > sym_tol * scale)
      throw std::runtime_error(
          "registration: curvature tensor breaks pair-exchange symmetry");

    // Every sampled sectional curvature must be strictly negative.
    for (int plane = 0; plane < 4; ++plane) {
      Vec u(n), w(n);
      for (int i = 0; i < n; ++i) {
        u[i] = rng.next_gaussian();
        w[i] = rng.next_gaussian();
      }
      const double K = sectional_curvature(model, p, u, w);
      max_abs_K = std::max(max_abs_K, std::abs(K));
      if (!(K < 0.0))
        throw std::runtime_error(
            "registration: sampled sectional curvature is not negative (K = " +
            std::to_string(K) + "); the model parameters are inadmissible");
    }
  }
  if (max_abs_K_out) *max_abs_K_out = max_abs_K;
}

}  // namespace

std::vector<std::string> model_names() {
  return {"hyperbolic", "complex-hyperbolic", "perturbed"};
}

ModelPtr make_model(const std::string& name, const ModelParams& params) {
  if (params.validation_samples < 1)
    throw std::invalid_argument("validation_samples must be >= 1");

  std::shared_ptr<Model> model;
  if (name == "hyperbolic") {
    if (params.dim < 3)
      throw std::invalid_argument("hyperbolic model needs dimension >= 3");
    if (!(params.k > 0.0))
      throw std::invalid_argument("hyperbolic model needs k > 0");
    model = std::make_shared<HyperbolicModel>(
        params.dim, params.k,
        params.curvature_mode.value_or(CurvatureMode::kClosedForm));
  } else if (name == "complex-hyperbolic") {
    if (params.dim != 4 && params.dim != 3)  // 3 = the unset default
      throw std::invalid_argument(
          "complex-hyperbolic model is 4-dimensional; pass dim 4 or omit it");
    model = std::make_shared<ComplexHyperbolicModel>(
        params.curvature_mode.value_or(CurvatureMode::kClosedForm));
  } else if (name == "perturbed") {
    if (params.dim < 3)
      throw std::invalid_argument("perturbed model needs dimension >= 3");
    if (!(params.k > 0.0))
      throw std::invalid_argument("perturbed model needs k > 0");
    const CurvatureMode mode = params.curvature_mode.value_or(
        params.amplitude == 0.0 ? CurvatureMode::kClosedForm
                                : CurvatureMode::kFiniteDifference);
    if (mode == CurvatureMode::kClosedForm && params.amplitude != 0.0)
      throw std::invalid_argument(
          "perturbed model supports closed-form curvature only at amplitude 0");
    model = std::make_shared<PerturbedModel>(params.dim, params.k,
                                             params.amplitude, mode);
  } else {
    throw std::invalid_argument("unknown model '" + name + "'");
  }

  double max_abs_K = 0.0;
  validate_model(*model, params.validation_samples, params.validation_seed,
                 &max_abs_K);
  if (auto* perturbed = dynamic_cast<PerturbedModel*>(model.get())) {
    // Sampled bound with headroom (the sample grid may miss the extremal
    // plane by some margin); never below the unperturbed curvature.
    perturbed->set_curvature_bound(
        std::max(max_abs_K * 1.25, perturbed->max_abs_curvature()));
  }
  return model;
}

}  // namespace horocurv
