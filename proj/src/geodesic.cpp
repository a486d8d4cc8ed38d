#include "horocurv/geodesic.hpp"

#include <cmath>
#include <stdexcept>

#include "horocurv/errors.hpp"
#include "horocurv/flow_detail.hpp"

namespace horocurv {

void IntegratorConfig::validate() const {
  if (!(step >= 0.0)) throw std::invalid_argument("integrator step must be >= 0");
  if (step > 1e-2)
    throw std::invalid_argument("integrator step must be <= 1e-2");
  if (renormalize_every < 1)
    throw std::invalid_argument("renormalize_every must be >= 1");
  if (method != "rk4")
    throw std::invalid_argument("unknown integration method '" + method +
                                "' (supported: rk4)");
}

namespace flow {

void contract(const Tensor3& gamma, const Vec& a, const Vec& b, Vec& out) {
  const int n = gamma.dim();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double inner = 0.0;
      for (int k = 0; k < n; ++k) inner += gamma(i, j, k) * b[k];
      acc += a[j] * inner;
    }
    out[i] = acc;
  }
}

FlowState::FlowState(int n, int frames) : x(Vec::Zero(n)), v(Vec::Zero(n)) {
  E.assign(frames, Vec::Zero(n));
}

void FlowState::axpy(double c, const FlowState& d) {
  x += c * d.x;
  v += c * d.v;
  for (std::size_t a = 0; a < E.size(); ++a) E[a] += c * d.E[a];
}

// Geodesic + parallel transport right-hand side:
//   x' = v,  v'^i = -Gamma^i_{jk} v^j v^k,  E'^i = -Gamma^i_{jk} v^j E^k.
void flow_rhs(const Model& model, const FlowState& s, FlowState& out) {
  if (!model.in_domain(Point(s.x)))
    throw std::domain_error("trajectory left the chart domain");
  const Tensor3 gamma = model.christoffel(Point(s.x));
  out.x = s.v;
  contract(gamma, s.v, s.v, out.v);
  out.v = -out.v;
  for (std::size_t a = 0; a < s.E.size(); ++a) {
    contract(gamma, s.v, s.E[a], out.E[a]);
    out.E[a] = -out.E[a];
  }
}

void rk4_step(const Model& model, FlowState& s, double dt, FlowState* k) {
  // k[0..3]: stage derivatives; k[4]: stage state scratch.
  flow_rhs(model, s, k[0]);
  k[4] = s;
  k[4].axpy(0.5 * dt, k[0]);
  flow_rhs(model, k[4], k[1]);
  k[4] = s;
  k[4].axpy(0.5 * dt, k[1]);
  flow_rhs(model, k[4], k[2]);
  k[4] = s;
  k[4].axpy(dt, k[2]);
  flow_rhs(model, k[4], k[3]);
  s.axpy(dt / 6.0, k[0]);
  s.axpy(dt / 3.0, k[1]);
  s.axpy(dt / 3.0, k[2]);
  s.axpy(dt / 6.0, k[3]);
}

void renormalize(const Model& model, FlowState& s) {
  const Mat g = model.metric(Point(s.x));
  const double vnorm = metric_norm(g, s.v);
  if (vnorm < 1e-12)
    throw FrameDegenerationError("velocity collapsed during renormalization");
  s.v /= vnorm;
  const std::vector<Vec> frame = gram_schmidt(g, {s.v}, s.E);
  if (frame.size() != s.E.size())
    throw FrameDegenerationError("frame lost rank during renormalization");
  s.E = frame;
}

}  // namespace flow

namespace {

GeodesicState to_state(const flow::FlowState& s, double t, long step_index) {
  GeodesicState out;
  out.t = t;
  out.position = Point(s.x);
  out.velocity = s.v;
  out.frame = s.E;
  out.step_index = step_index;
  return out;
}

flow::FlowState from_state(const GeodesicState& s) {
  flow::FlowState out(static_cast<int>(s.velocity.size()),
                      static_cast<int>(s.frame.size()));
  out.x = s.position.x;
  out.v = s.velocity;
  out.E = s.frame;
  return out;
}

}  // namespace

GeodesicState initial_state(const Model& model, const TangentVector& v,
                            const std::vector<Vec>& frame) {
  // curvature_operator performs exactly the validation needed here (domain,
  // unit velocity, orthonormal frame); reuse its checks without its output.
  (void)curvature_operator(model, v, frame);
  GeodesicState s;
  s.t = 0.0;
  s.position = v.base;
  s.velocity = v.v;
  s.frame = frame;
  s.step_index = 0;
  return s;
}

GeodesicState geodesic_step(const Model& model, const GeodesicState& state,
                            const IntegratorConfig& cfg) {
  cfg.validate();
  if (cfg.step == 0.0) return state;

  flow::FlowState s = from_state(state);
  std::vector<flow::FlowState> scratch(
      5, flow::FlowState(model.dim(), static_cast<int>(state.frame.size())));
  flow::rk4_step(model, s, cfg.step, scratch.data());
  const long index = state.step_index + 1;
  if (index % cfg.renormalize_every == 0) flow::renormalize(model, s);
  if (!model.in_domain(Point(s.x)))
    throw std::domain_error("trajectory left the chart domain");
  return to_state(s, state.t + cfg.step, index);
}

std::vector<GeodesicState> transport_frame(const Model& model,
                                           const TangentVector& v,
                                           const std::vector<Vec>& frame,
                                           double horizon,
                                           const IntegratorConfig& cfg) {
  cfg.validate();
  if (cfg.step == 0.0)
    throw std::invalid_argument("transport needs a positive step");
  const double dt = horizon >= 0.0 ? cfg.step : -cfg.step;
  const long steps = std::llround(std::abs(horizon) / cfg.step);

  GeodesicState start = initial_state(model, v, frame);
  std::vector<GeodesicState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(steps) + 1);
  trajectory.push_back(start);

  flow::FlowState s = from_state(start);
  std::vector<flow::FlowState> scratch(
      5, flow::FlowState(model.dim(), static_cast<int>(frame.size())));
  for (long i = 1; i <= steps; ++i) {
    flow::rk4_step(model, s, dt, scratch.data());
    if (i % cfg.renormalize_every == 0) flow::renormalize(model, s);
    if (!model.in_domain(Point(s.x)))
      throw std::domain_error("trajectory left the chart domain");
    trajectory.push_back(to_state(s, static_cast<double>(i) * dt, i));
  }
  return trajectory;
}

}  // namespace horocurv
