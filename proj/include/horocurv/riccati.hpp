// riccati.hpp - stable solutions of the matrix Riccati equation
//   S' + S^2 + R_c = 0
// along unit-speed geodesics, where R_c is the directional curvature operator
// in a parallel frame. The stable solution is the shape operator of the
// horosphere orthogonal to the geodesic; it is reached by integrating forward
// from a large initial condition far in the past.
#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "horocurv/geodesic.hpp"
#include "horocurv/geometry.hpp"
#include "horocurv/model.hpp"

namespace horocurv {

enum class InitialConditionKind {
  kLargeMultipleOfIdentity,   // S(-T) = 10 sqrt|K_max| Id
  kConstantCurvatureGuess,    // S(-T) = sqrt|K_max| Id
};

std::string to_string(InitialConditionKind kind);

// Converged shape operator, expressed in the parallel frame of its trajectory.
struct ShapeOperator {
  Mat matrix;        // symmetric (n-1) x (n-1)
  double at_time = 0.0;
  long frame_id = 0;  // index into the owning trajectory

  // Sorted ascending.
  Vec eigenvalues() const;
  // Symmetry to 1e-10, smallest eigenvalue >= -1e-8, largest <= eigen_cap.
  void validate(double eigen_cap) const;
};

struct RiccatiConfig {
  double horizon = 30.0;        // integrate S from t = -horizon to 0
  double convergence_tol = 1e-6;
  InitialConditionKind initial_condition =
      InitialConditionKind::kLargeMultipleOfIdentity;
  // Overrides the named kinds with S(-T) = initial_multiple * Id.
  std::optional<double> initial_multiple;
  IntegratorConfig integrator;
  bool adapted_frame = true;  // seed Jv first on Kahler models

  void validate() const;
};

// One stored sample of the coupled (geodesic, frame, S) integration.
struct RiccatiSample {
  double t;
  Point position;
  Vec velocity;
  std::vector<Vec> frame;
  Mat S;        // symmetrized
  double trace_S;
};

struct RiccatiRun {
  double horizon;
  double convergence_tol;
  double step;
  InitialConditionKind initial_condition;
  ShapeOperator S0;
  double convergence_gap;   // max-abs difference against the run from -2T
  std::vector<RiccatiSample> trajectory;  // t = -T ... 0, uniform grid
};

// Largest admissible Riccati horizon for the model's chart: the convergence
// probe integrates to twice the horizon, which must stay representable.
double chart_safe_horizon(const Model& model, double requested);

// Integrates the coupled system for the geodesic through v. Entries of S are
// guarded against blow-up (BlowUpError beyond 1e6); ConvergenceError if the
// gap against the doubled horizon exceeds cfg.convergence_tol. Horizons with
// 2 * horizon beyond model.max_chart_time() are rejected.
RiccatiRun stable_shape_operator(const Model& model, const TangentVector& v,
                                 const RiccatiConfig& cfg = {});

// Max over interior grid samples with t in [-window, 0] of
//   | d/dt trace S + trace(S^2) + Ric(c'(t)) |
// where d/dt is a symmetric five-point central difference on the stored
// trace sequence (not the integrator's right-hand side), fourth-order
// accurate so refining the step keeps shrinking the residual at the
// integrator's own rate.
double traced_riccati_residual(const Model& model, const RiccatiRun& run,
                               double window);

// Max over the same grid window of the full matrix residual
//   || dS/dt + S^2 + R_c ||_maxabs  (dS/dt by the same central stencil).
double matrix_riccati_residual(const Model& model, const RiccatiRun& run,
                               double window);

void to_json(nlohmann::json& j, const ShapeOperator& s);
void to_json(nlohmann::json& j, const RiccatiRun& run);  // no trajectory dump

}  // namespace horocurv
