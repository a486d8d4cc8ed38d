#include "horocurv/model.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "horocurv/errors.hpp"
#include "horocurv/finite_diff.hpp"

namespace horocurv {

std::string to_string(CurvatureMode mode) {
  return mode == CurvatureMode::kClosedForm ? "closed-form" : "finite-difference";
}

Vec Model::riemann_closed_form(const Point&, const Vec&, const Vec&,
                               const Vec&) const {
  throw std::logic_error("model '" + name() +
                         "' has no closed-form curvature tensor");
}

Mat Model::complex_structure(const Point&) const {
  throw std::logic_error("model '" + name() + "' carries no complex structure");
}

Vec Model::riemann_finite_difference(const Point& p, const Vec& u,
                                     const Vec& v, const Vec& w) const {
  return fd::riemann_from_christoffel(*this, p, u, v, w);
}

Vec Model::riemann(const Point& p, const Vec& u, const Vec& v,
                   const Vec& w) const {
  if (mode_ == CurvatureMode::kClosedForm) return riemann_closed_form(p, u, v, w);
  return riemann_finite_difference(p, u, v, w);
}

namespace {

void require_in_domain(const Model& model, const Point& p) {
  if (p.dim() != model.dim())
    throw std::invalid_argument("point dimension does not match the model");
  if (!model.in_domain(p))
    throw std::domain_error("point outside the chart domain of model '" +
                            model.name() + "'");
}

void require_unit(const Model& model, const TangentVector& v) {
  const Mat g = model.metric(v.base);
  const double norm = metric_norm(g, v.v);
  if (std::abs(norm - 1.0) > 1e-8)
    throw std::invalid_argument("tangent vector is not unit (|v|_g = " +
                                std::to_string(norm) + ")");
}

}  // namespace

Mat metric_at(const Model& model, const Point& p) {
  require_in_domain(model, p);
  return model.metric(p);
}

Tensor3 christoffel_at(const Model& model, const Point& p) {
  require_in_domain(model, p);
  return model.christoffel(p);
}

Vec riemann_at(const Model& model, const Point& p, const Vec& u, const Vec& v,
               const Vec& w) {
  require_in_domain(model, p);
  return model.riemann(p, u, v, w);
}

Mat curvature_matrix_raw(const Model& model, const Point& p, const Vec& v,
                         const std::vector<Vec>& frame) {
  const int m = static_cast<int>(frame.size());
  const Mat g = model.metric(p);
  Mat out(m, m);
  for (int a = 0; a < m; ++a) {
    const Vec r = model.riemann(p, frame[a], v, v);  // R(e_a, v)v
    const Vec gr = g * r;
    for (int b = 0; b < m; ++b) out(a, b) = gr.dot(frame[b]);
  }
  return 0.5 * (out + out.transpose());
}

Mat curvature_operator(const Model& model, const TangentVector& v,
                       const std::vector<Vec>& frame) {
  require_in_domain(model, v.base);
  require_unit(model, v);
  if (static_cast<int>(frame.size()) != model.dim() - 1)
    throw std::invalid_argument("frame must span the orthogonal complement");

  const Mat g = model.metric(v.base);
  std::vector<Vec> all;
  all.reserve(frame.size() + 1);
  all.push_back(v.v);
  for (const Vec& e : frame) all.push_back(e);
  const Mat gram = gram_matrix(g, all);
  const double defect =
      (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-8)
    throw std::invalid_argument(
        "frame is not orthonormal (Gram defect " + std::to_string(defect) + ")");

  return curvature_matrix_raw(model, v.base, v.v, frame);
}

double ricci(const Model& model, const TangentVector& v) {
  const std::vector<Vec> frame = seed_frame(model, v);
  return curvature_matrix_raw(model, v.base, v.v, frame).trace();
}

RicciScalar ricci_and_scalar(const Model& model, const TangentVector& v) {
  require_in_domain(model, v.base);
  require_unit(model, v);
  const int n = model.dim();
  const Mat g = model.metric(v.base);

  // Any g-orthonormal basis at the base point; Gram-Schmidt over the axes.
  std::vector<Vec> axes;
  for (int a = 0; a < n; ++a) axes.push_back(Vec::Unit(n, a));
  const std::vector<Vec> basis = gram_schmidt(g, {}, axes);
  if (static_cast<int>(basis.size()) != n)
    throw FrameDegenerationError("could not build an orthonormal basis");

  double scal = 0.0;
  for (int a = 0; a < n; ++a) {
    std::vector<Vec> complement;
    for (int b = 0; b < n; ++b)
      if (b != a) complement.push_back(basis[b]);
    scal += curvature_matrix_raw(model, v.base, basis[a], complement).trace();
  }
  return {ricci(model, v), scal};
}

double sectional_curvature(const Model& model, const Point& p, const Vec& u,
                           const Vec& w) {
  require_in_domain(model, p);
  const Mat g = model.metric(p);
  const double nu = metric_norm(g, u);
  if (nu == 0.0) throw std::invalid_argument("zero vector spans no plane");
  const Vec a = u / nu;
  std::vector<Vec> rest = gram_schmidt(g, {a}, {w});
  if (rest.empty())
    throw std::invalid_argument("vectors do not span a 2-plane");
  const Vec& b = rest[0];
  // K = <R(a, b)b, a> for the orthonormal pair.
  return metric_inner(g, model.riemann(p, a, b, b), a);
}

std::vector<Vec> seed_frame(const Model& model, const TangentVector& v,
                            bool adapted) {
  require_in_domain(model, v.base);
  require_unit(model, v);
  const int n = model.dim();
  const Mat g = model.metric(v.base);

  std::vector<Vec> fixed = {v.v};
  std::vector<Vec> frame;
  if (adapted && model.has_complex_structure()) {
    // Jv is automatically unit and g-orthogonal to v on a Kahler model.
    Vec jv = model.complex_structure(v.base) * v.v;
    std::vector<Vec> first = gram_schmidt(g, fixed, {jv});
    if (first.empty())
      throw FrameDegenerationError("Jv degenerated under projection");
    frame.push_back(first[0]);
    fixed.push_back(first[0]);
  }

  std::vector<Vec> axes;
  for (int a = 0; a < n; ++a) {
    const Vec e = Vec::Unit(n, a);
    const double align =
        std::abs(metric_inner(g, e, v.v)) / metric_norm(g, e);
    if (align > 0.9) continue;  // nearly parallel to v, poor seed
    axes.push_back(e);
  }
  for (const Vec& w : gram_schmidt(g, fixed, axes)) {
    if (static_cast<int>(frame.size()) == n - 1) break;
    frame.push_back(w);
  }
  if (static_cast<int>(frame.size()) != n - 1)
    throw FrameDegenerationError(
        "axis seeding produced fewer than n-1 independent directions");
  return frame;
}

TangentVector unit_vector(const Model& model, Point base, Vec components) {
  require_in_domain(model, base);
  const Mat g = model.metric(base);
  const double norm = metric_norm(g, components);
  if (norm == 0.0)
    throw std::invalid_argument("cannot normalize the zero vector");
  return TangentVector{std::move(base), components / norm};
}

}  // namespace horocurv
