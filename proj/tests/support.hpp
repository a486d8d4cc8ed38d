// support.hpp - shared helpers for the test suites.
#pragma once

#include <cstdlib>
#include <string>

#include "horocurv/analysis.hpp"
#include "horocurv/errors.hpp"
#include "horocurv/geodesic.hpp"
#include "horocurv/geometry.hpp"
#include "horocurv/liouville.hpp"
#include "horocurv/model.hpp"
#include "horocurv/riccati.hpp"
#include "horocurv/rng.hpp"

namespace testsup {

using horocurv::Mat;
using horocurv::Point;
using horocurv::TangentVector;
using horocurv::Vec;

inline double maxabs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline Vec vec4(double a, double b, double c, double d) {
  Vec v(4);
  v << a, b, c, d;
  return v;
}

inline horocurv::ModelPtr hyperbolic(int dim = 3, double k = 1.0) {
  horocurv::ModelParams p;
  p.dim = dim;
  p.k = k;
  return horocurv::make_model("hyperbolic", p);
}

inline horocurv::ModelPtr complex_hyperbolic() {
  return horocurv::make_model("complex-hyperbolic", {});
}

inline horocurv::ModelPtr perturbed(double amplitude, int dim = 3,
                                    double k = 1.0) {
  horocurv::ModelParams p;
  p.dim = dim;
  p.k = k;
  p.amplitude = amplitude;
  return horocurv::make_model("perturbed", p);
}

// A reproducible g-unit direction at the model's default base point.
inline TangentVector unit_direction(const horocurv::Model& m,
                                    std::uint64_t seed = 0,
                                    std::uint64_t index = 0) {
  horocurv::SphereSampler sampler(m, m.default_base(), seed);
  return sampler.sample(index);
}

}  // namespace testsup
