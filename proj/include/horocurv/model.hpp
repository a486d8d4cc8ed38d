// model.hpp - negatively curved model geometries in explicit charts, plus the
// pointwise curvature operations everything downstream consumes.
#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "horocurv/geometry.hpp"
#include "horocurv/rng.hpp"

namespace horocurv {

enum class CurvatureMode { kClosedForm, kFiniteDifference };

std::string to_string(CurvatureMode mode);

// A Riemannian metric in a fixed coordinate chart. Implementations supply the
// metric tensor, closed-form Christoffel symbols, and (where available) an
// algebraic curvature tensor; the finite-difference route is shared.
class Model {
 public:
  virtual ~Model() = default;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  CurvatureMode curvature_mode() const { return mode_; }

  // True when the curvature tensor field is the same at every point in the
  // sense the integrated flow identities need (constant integrands).
  virtual bool locally_symmetric() const = 0;

  // Upper bound on |sectional curvature| over the working region. Feeds the
  // Riccati initial condition and the shape-operator eigenvalue cap.
  double max_abs_curvature() const { return max_abs_curvature_; }

  // Strict chart membership. Geodesics approach the chart boundary
  // exponentially under backward flow, so the domain must not carry a fixed
  // collar; finite-difference stencils do their own reach checks instead.
  virtual bool in_domain(const Point& p) const = 0;

  // Longest |t| a unit-speed geodesic from the reference region can be
  // followed before the chart loses the boundary distance to floating-point
  // granularity. The half-space chart stores the height as a raw coordinate
  // (uniform relative precision at any scale: no limit); the ball chart
  // resolves 1 - r only down to one ulp of 1.
  virtual double max_chart_time() const {
    return std::numeric_limits<double>::infinity();
  }

  // Raw evaluations; the free functions below add the domain checks.
  virtual Mat metric(const Point& p) const = 0;
  virtual Tensor3 christoffel(const Point& p) const = 0;

  virtual bool has_closed_form_curvature() const = 0;
  // Algebraic R(u,v)w; only callable when has_closed_form_curvature().
  virtual Vec riemann_closed_form(const Point& p, const Vec& u, const Vec& v,
                                  const Vec& w) const;

  // Complex structure J at p, for Kahler models; others throw.
  virtual Mat complex_structure(const Point& p) const;
  virtual bool has_complex_structure() const { return false; }

  // Model parameters for report provenance.
  virtual nlohmann::json parameters() const = 0;

  // A point in the model's reference sampling box (used for registration
  // validation and property tests).
  virtual Point sample_point(CounterRng& rng) const = 0;
  virtual Point default_base() const = 0;

  // R(u,v)w dispatched through curvature_mode().
  Vec riemann(const Point& p, const Vec& u, const Vec& v, const Vec& w) const;

 protected:
  Model(std::string name, int dim, CurvatureMode mode)
      : name_(std::move(name)), dim_(dim), mode_(mode) {}

  // Finite-difference evaluation of R(u,v)w. Models may reroute regions where
  // the tensor is known exactly (e.g. where a perturbation vanishes), which
  // also keeps deep trajectory tails clear of stencil underflow.
  virtual Vec riemann_finite_difference(const Point& p, const Vec& u,
                                        const Vec& v, const Vec& w) const;

  void set_max_abs_curvature(double value) { max_abs_curvature_ = value; }

 private:
  std::string name_;
  int dim_;
  CurvatureMode mode_;
  double max_abs_curvature_ = 0.0;
};

using ModelPtr = std::shared_ptr<const Model>;

// ---- pointwise operations ------------------------------------------------

// Metric tensor at p; throws std::domain_error outside the chart.
Mat metric_at(const Model& model, const Point& p);

// Christoffel symbols Gamma^i_{jk} at p, symmetric in (j, k).
Tensor3 christoffel_at(const Model& model, const Point& p);

// R(u,v)w at p through the model's curvature mode.
Vec riemann_at(const Model& model, const Point& p, const Vec& u, const Vec& v,
               const Vec& w);

// Directional curvature operator M_ab = <R(e_a, v)v, e_b> for a g-orthonormal
// frame {e_a} of the orthogonal complement of the unit vector v. Validates
// orthonormality of {v, e_1, ..., e_{n-1}} to 1e-8 and symmetrizes the result.
Mat curvature_operator(const Model& model, const TangentVector& v,
                       const std::vector<Vec>& frame);

// Same contraction without the orthonormality validation; integrator-internal
// (Runge-Kutta stage states drift off the constraint at O(step^2)).
Mat curvature_matrix_raw(const Model& model, const Point& p, const Vec& v,
                         const std::vector<Vec>& frame);

// Ricci curvature Ric(v, v) for unit v.
double ricci(const Model& model, const TangentVector& v);

// (Ric(v,v), scalar curvature at the base point).
struct RicciScalar {
  double ricci;
  double scalar;
};
RicciScalar ricci_and_scalar(const Model& model, const TangentVector& v);

// Sectional curvature of the plane spanned by u, w at p (inputs need not be
// orthonormal; they must be independent).
double sectional_curvature(const Model& model, const Point& p, const Vec& u,
                           const Vec& w);

// Completes unit v to a g-orthonormal frame of its orthogonal complement by
// Gram-Schmidt over the chart axes, skipping axes whose normalized inner
// product with v exceeds 0.9. With adapted = true on a Kahler model, Jv is
// seeded first.
std::vector<Vec> seed_frame(const Model& model, const TangentVector& v,
                            bool adapted = false);

// Normalizes components to a unit tangent vector at base.
TangentVector unit_vector(const Model& model, Point base, Vec components);

// ---- registry -------------------------------------------------------------

struct ModelParams {
  int dim = 3;
  double k = 1.0;            // hyperbolic: curvature is -k^2
  double amplitude = 0.05;   // perturbed family only
  std::optional<CurvatureMode> curvature_mode;  // default chosen per model
  int validation_samples = 128;  // registration sampling budget
  std::uint64_t validation_seed = 2026;
};

// Registered model ids, in presentation order.
std::vector<std::string> model_names();

// Builds and validates a model. Validation samples the reference box and
// rejects: non-SPD metric tensors, broken curvature-tensor symmetries, and any
// non-negative sectional curvature. Throws std::invalid_argument on bad
// parameters and std::runtime_error when validation fails.
ModelPtr make_model(const std::string& name, const ModelParams& params = {});

}  // namespace horocurv
