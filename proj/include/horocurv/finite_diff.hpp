// finite_diff.hpp - central-difference stencils on chart quantities. First
// derivatives step h = 1e-5; derivative-of-Christoffel stencils (second
// derivatives of the metric when Christoffels are themselves differenced) use
// the wider h = 1e-4.
#pragma once

#include "horocurv/geometry.hpp"

namespace horocurv {

class Model;

namespace fd {

inline constexpr double kFirstOrderStep = 1e-5;
inline constexpr double kSecondOrderStep = 1e-4;

// Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{lj} - d_l g_{jk}), with the
// metric derivatives taken by central differences. Independent of any
// closed-form Christoffel path, so it doubles as a test oracle.
Tensor3 christoffel_from_metric(const Model& model, const Point& p,
                                double h = kFirstOrderStep);

// R(u,v)w from the coordinate formula
//   R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
// with d Gamma by central differences of model.christoffel().
Vec riemann_from_christoffel(const Model& model, const Point& p, const Vec& u,
                             const Vec& v, const Vec& w,
                             double h = kSecondOrderStep);

}  // namespace fd
}  // namespace horocurv
