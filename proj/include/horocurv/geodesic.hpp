// geodesic.hpp - unit-speed geodesic flow with a parallel-transported
// orthonormal frame along it, integrated by classic fixed-step RK4 with
// periodic renormalization back onto the constraint set.
#pragma once

#include <string>
#include <vector>

#include "horocurv/geometry.hpp"
#include "horocurv/model.hpp"

namespace horocurv {

struct GeodesicState {
  double t = 0.0;
  Point position;
  Vec velocity;             // chart components of the unit velocity
  std::vector<Vec> frame;   // parallel g-orthonormal basis of velocity^perp
  long step_index = 0;      // steps taken since the initial state
};

struct IntegratorConfig {
  double step = 1e-3;
  int renormalize_every = 10;
  std::string method = "rk4";  // fixed-step classic Runge-Kutta

  void validate() const;
};

// One integrator step of length cfg.step (>= 0; step 0 returns the state
// unchanged). Renormalization fires when the incremented step_index is a
// multiple of cfg.renormalize_every. Throws std::domain_error if the
// trajectory leaves the chart.
GeodesicState geodesic_step(const Model& model, const GeodesicState& state,
                            const IntegratorConfig& cfg);

// Integrates from t = 0 to t = horizon (sign of horizon sets the direction)
// and returns the dense trajectory, one state per step, initial state first.
// `frame` must be a g-orthonormal basis of v^perp (see seed_frame).
std::vector<GeodesicState> transport_frame(const Model& model,
                                           const TangentVector& v,
                                           const std::vector<Vec>& frame,
                                           double horizon,
                                           const IntegratorConfig& cfg);

// Builds the t = 0 state from a unit tangent vector, validating the frame.
GeodesicState initial_state(const Model& model, const TangentVector& v,
                            const std::vector<Vec>& frame);

}  // namespace horocurv
