#include "horocurv/riccati.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "horocurv/errors.hpp"
#include "horocurv/flow_detail.hpp"

namespace horocurv {

std::string to_string(InitialConditionKind kind) {
  switch (kind) {
    case InitialConditionKind::kLargeMultipleOfIdentity:
      return "large_multiple_of_identity";
    case InitialConditionKind::kConstantCurvatureGuess:
      return "constant_curvature_guess";
  }
  throw std::logic_error("unknown initial condition kind");
}

Vec ShapeOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Mat> solver(matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue decomposition failed");
  return solver.eigenvalues();
}

void ShapeOperator::validate(double eigen_cap) const {
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw ConvergenceError("shape operator drifted off the symmetric cone (deviation " +
                           std::to_string(asym) + ")");
  const Vec ev = eigenvalues();
  if (ev[0] < -1e-8)
    throw ConvergenceError(
        "shape operator has a negative principal curvature (" +
        std::to_string(ev[0]) + "); horosphere convexity violated");
  if (ev[ev.size() - 1] > eigen_cap)
    throw ConvergenceError("principal curvature " +
                           std::to_string(ev[ev.size() - 1]) +
                           " exceeds the comparison bound " +
                           std::to_string(eigen_cap));
}

void RiccatiConfig::validate() const {
  integrator.validate();
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(convergence_tol > 0.0))
    throw std::invalid_argument("convergence_tol must be positive");
  if (initial_multiple && !(*initial_multiple > 0.0))
    throw std::invalid_argument("initial_multiple must be positive");
  if (integrator.step == 0.0)
    throw std::invalid_argument("Riccati integration needs a positive step");
}

namespace {

constexpr double kBlowUpCap = 1e6;

Mat curvature_term(const Model& model, const flow::FlowState& s) {
  return curvature_matrix_raw(model, Point(s.x), s.v, s.E);
}

// One classical Runge-Kutta step of the coupled system
//   (geodesic flow, parallel frame, S' = -S^2 - R_c).
void coupled_rk4_step(const Model& model, flow::FlowState& s, Mat& S,
                      double dt, flow::FlowState* k) {
  const auto s_rhs = [&](const flow::FlowState& state, const Mat& shape) {
    return (-(shape * shape) - curvature_term(model, state)).eval();
  };

  flow::flow_rhs(model, s, k[0]);
  const Mat g1 = s_rhs(s, S);

  k[4] = s;
  k[4].axpy(0.5 * dt, k[0]);
  Mat stage = S + (0.5 * dt) * g1;
  flow::flow_rhs(model, k[4], k[1]);
  const Mat g2 = s_rhs(k[4], stage);

  k[4] = s;
  k[4].axpy(0.5 * dt, k[1]);
  stage = S + (0.5 * dt) * g2;
  flow::flow_rhs(model, k[4], k[2]);
  const Mat g3 = s_rhs(k[4], stage);

  k[4] = s;
  k[4].axpy(dt, k[2]);
  stage = S + dt * g3;
  flow::flow_rhs(model, k[4], k[3]);
  const Mat g4 = s_rhs(k[4], stage);

  s.axpy(dt / 6.0, k[0]);
  s.axpy(dt / 3.0, k[1]);
  s.axpy(dt / 3.0, k[2]);
  s.axpy(dt / 6.0, k[3]);
  S += (dt / 6.0) * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
  S = 0.5 * (S + S.transpose()).eval();
}

// Re-orthonormalizes (v, E) and rewrites S in the refreshed frame via the
// cross-Gram matrix P_ab = <e'_a, e_b>_g.
void renormalize_with_shape(const Model& model, flow::FlowState& s, Mat& S) {
  const Mat g = model.metric(Point(s.x));
  const double vnorm = metric_norm(g, s.v);
  if (vnorm < 1e-12)
    throw FrameDegenerationError("velocity collapsed during renormalization");
  s.v /= vnorm;
  const std::vector<Vec> fresh = gram_schmidt(g, {s.v}, s.E);
  if (fresh.size() != s.E.size())
    throw FrameDegenerationError("frame lost rank during renormalization");
  const int m = static_cast<int>(fresh.size());
  Mat P(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) P(a, b) = fresh[a].dot(g * s.E[b]);
  S = (P * S * P.transpose()).eval();
  S = 0.5 * (S + S.transpose()).eval();
  s.E = fresh;
}

struct ForwardOutcome {
  Mat S0;
  long final_index = 0;
};

// Integrates the coupled system forward over `steps` grid steps starting at
// t = -steps * dt_abs. When `record` is non-null a sample is appended per
// grid node (including the initial one).
ForwardOutcome run_forward(const Model& model, flow::FlowState s, Mat S,
                           long steps, const IntegratorConfig& icfg,
                           std::vector<RiccatiSample>* record,
                           flow::FlowState* scratch) {
  const double dt = icfg.step;
  const auto append = [&](long i) {
    if (!record) return;
    RiccatiSample sample;
    sample.t = static_cast<double>(i - steps) * dt;
    sample.position = Point(s.x);
    sample.velocity = s.v;
    sample.frame = s.E;
    sample.S = S;
    sample.trace_S = S.trace();
    record->push_back(std::move(sample));
  };

  append(0);
  for (long i = 1; i <= steps; ++i) {
    coupled_rk4_step(model, s, S, dt, scratch);
    if (!(S.cwiseAbs().maxCoeff() <= kBlowUpCap))  // also catches NaN
      throw BlowUpError(
          "shape operator entries exceeded 1e6 during integration; "
          "the trajectory is not in the stable regime");
    if (i % icfg.renormalize_every == 0) renormalize_with_shape(model, s, S);
    if (!model.in_domain(Point(s.x)))
      throw std::domain_error("trajectory left the chart domain");
    append(i);
  }
  return ForwardOutcome{S, steps};
}

}  // namespace

double chart_safe_horizon(const Model& model, double requested) {
  return std::min(requested, model.max_chart_time() / 2.0);
}

RiccatiRun stable_shape_operator(const Model& model, const TangentVector& v,
                                 const RiccatiConfig& cfg) {
  cfg.validate();
  if (2.0 * cfg.horizon > model.max_chart_time() * (1.0 + 1e-12))
    throw std::invalid_argument(
        "horizon " + std::to_string(cfg.horizon) +
        " overruns the chart-representable depth of model '" + model.name() +
        "'; cap it at chart_safe_horizon()");
  const int n = model.dim();
  const std::vector<Vec> frame =
      seed_frame(model, v, cfg.adapted_frame && model.has_complex_structure());
  // Full validation of the inputs (domain, unit speed, orthonormality).
  (void)curvature_operator(model, v, frame);

  const double step = cfg.integrator.step;
  const long steps_half = std::llround(cfg.horizon / step);
  if (steps_half < 1)
    throw std::invalid_argument("horizon is shorter than one integrator step");

  const double kmax = model.max_abs_curvature();
  if (!(kmax > 0.0))
    throw std::invalid_argument("model reports no curvature bound");
  double multiple = 0.0;
  if (cfg.initial_multiple) {
    multiple = *cfg.initial_multiple;
  } else {
    switch (cfg.initial_condition) {
      case InitialConditionKind::kLargeMultipleOfIdentity:
        multiple = 10.0 * std::sqrt(kmax);
        break;
      case InitialConditionKind::kConstantCurvatureGuess:
        multiple = std::sqrt(kmax);
        break;
    }
  }

  // Backward flow-only pass 0 -> -2T; keep the states at -T and -2T.
  flow::FlowState state(n, n - 1);
  state.x = v.base.x;
  state.v = v.v;
  state.E = frame;
  std::vector<flow::FlowState> scratch(5, flow::FlowState(n, n - 1));

  flow::FlowState at_half = state;   // overwritten at i == steps_half
  for (long i = 1; i <= 2 * steps_half; ++i) {
    flow::rk4_step(model, state, -step, scratch.data());
    if (i % cfg.integrator.renormalize_every == 0)
      flow::renormalize(model, state);
    if (!model.in_domain(Point(state.x)))
      throw std::domain_error("trajectory left the chart domain");
    if (i == steps_half) at_half = state;
  }

  const Mat S_init = multiple * Mat::Identity(n - 1, n - 1);

  // Reference run from -2T (convergence probe; trajectory not kept).
  const ForwardOutcome doubled = run_forward(
      model, state, S_init, 2 * steps_half, cfg.integrator, nullptr,
      scratch.data());

  // Primary run from -T with full trajectory storage.
  RiccatiRun run;
  run.horizon = cfg.horizon;
  run.convergence_tol = cfg.convergence_tol;
  run.step = step;
  run.initial_condition = cfg.initial_condition;
  run.trajectory.reserve(static_cast<std::size_t>(steps_half) + 1);
  const ForwardOutcome primary =
      run_forward(model, at_half, S_init, steps_half, cfg.integrator,
                  &run.trajectory, scratch.data());

  run.convergence_gap = (primary.S0 - doubled.S0).cwiseAbs().maxCoeff();
  if (run.convergence_gap > cfg.convergence_tol)
    throw ConvergenceError(
        "stable solution not reached: doubling the horizon moves S(0) by " +
        std::to_string(run.convergence_gap) + " (tolerance " +
        std::to_string(cfg.convergence_tol) + "); increase the horizon");

  run.S0.matrix = 0.5 * (primary.S0 + primary.S0.transpose());
  run.S0.at_time = 0.0;
  run.S0.frame_id = primary.final_index;
  // Comparison bound at finite horizon: against constant curvature -kmax,
  // any initial condition c Id with c > 0 satisfies
  //   S(0) <= sqrt(kmax) coth(sqrt(kmax) T) Id,
  // which tends to the infinite-horizon bound sqrt(kmax) Id from above.
  const double root = std::sqrt(kmax);
  run.S0.validate(root / std::tanh(root * cfg.horizon) + 1e-6);
  return run;
}

namespace {

// Calls fn(i) for every trajectory index whose node lies in [-window, 0] and
// has two neighbors on each side, as the five-point stencil requires.
template <typename F>
void for_interior_window(const RiccatiRun& run, double window, F&& fn) {
  if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
  const long last = static_cast<long>(run.trajectory.size()) - 1;
  if (last < 4)
    throw std::invalid_argument("trajectory too short for a residual window");
  long first = last - std::llround(window / run.step);
  if (first < 2) first = 2;
  for (long i = first; i <= last - 2; ++i) fn(i);
}

}  // namespace

// Both residuals differentiate the stored samples with the symmetric
// five-point stencil (-f[i+2] + 8 f[i+1] - 8 f[i-1] + f[i-2]) / (12 h).
// Its truncation error is O(h^4), matching the integrator's order, so the
// residual keeps shrinking at the integrator's rate when the step is refined
// instead of stalling at the second-order differencing floor.

double traced_riccati_residual(const Model& model, const RiccatiRun& run,
                               double window) {
  double worst = 0.0;
  for_interior_window(run, window, [&](long i) {
    const auto& traj = run.trajectory;
    const RiccatiSample& cur = traj[i];
    const double ddt =
        (-traj[i + 2].trace_S + 8.0 * traj[i + 1].trace_S -
         8.0 * traj[i - 1].trace_S + traj[i - 2].trace_S) /
        (12.0 * run.step);
    const double tr_s2 = (cur.S * cur.S).trace();
    const double ric =
        curvature_matrix_raw(model, cur.position, cur.velocity, cur.frame)
            .trace();
    worst = std::max(worst, std::abs(ddt + tr_s2 + ric));
  });
  return worst;
}

double matrix_riccati_residual(const Model& model, const RiccatiRun& run,
                               double window) {
  double worst = 0.0;
  for_interior_window(run, window, [&](long i) {
    const auto& traj = run.trajectory;
    const RiccatiSample& cur = traj[i];
    const Mat ddt = (-traj[i + 2].S + 8.0 * traj[i + 1].S -
                     8.0 * traj[i - 1].S + traj[i - 2].S) /
                    (12.0 * run.step);
    const Mat rc =
        curvature_matrix_raw(model, cur.position, cur.velocity, cur.frame);
    worst = std::max(worst, (ddt + cur.S * cur.S + rc).cwiseAbs().maxCoeff());
  });
  return worst;
}

void to_json(nlohmann::json& j, const ShapeOperator& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < s.matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < s.matrix.cols(); ++c) row.push_back(s.matrix(r, c));
    rows.push_back(std::move(row));
  }
  const Vec ev = s.eigenvalues();
  j = nlohmann::json{
      {"matrix", std::move(rows)},
      {"at_time", s.at_time},
      {"frame_id", s.frame_id},
      {"eigenvalues", std::vector<double>(ev.data(), ev.data() + ev.size())},
  };
}

void to_json(nlohmann::json& j, const RiccatiRun& run) {
  j = nlohmann::json{
      {"horizon", run.horizon},
      {"convergence_tol", run.convergence_tol},
      {"step", run.step},
      {"initial_condition", to_string(run.initial_condition)},
      {"convergence_gap", run.convergence_gap},
      {"samples", run.trajectory.size()},
      {"shape_operator", run.S0},
  };
}

}  // namespace horocurv
