#pragma once

// Internal shared machinery for the geodesic and shape-operator integrators.
// Not part of the public surface; subject to change without notice.

#include <vector>

#include "horocurv/geometry.hpp"
#include "horocurv/model.hpp"

namespace horocurv::flow {

// State advected along a geodesic: position, velocity, and a set of
// parallel-transported frame vectors.
struct FlowState {
  Vec x;
  Vec v;
  std::vector<Vec> E;

  FlowState(int n, int frames);
  void axpy(double c, const FlowState& d);
};

// out_i = Gamma^i_{jk} a^j b^k
void contract(const Tensor3& gamma, const Vec& a, const Vec& b, Vec& out);

void flow_rhs(const Model& model, const FlowState& s, FlowState& out);

// Advances s in place by one classical Runge-Kutta step of size dt.
// k must point at five FlowState scratch buffers of matching shape.
void rk4_step(const Model& model, FlowState& s, double dt, FlowState* k);

// Restores unit velocity and an orthonormal frame at the current position.
void renormalize(const Model& model, FlowState& s);

}  // namespace horocurv::flow
