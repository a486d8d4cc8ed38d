// analysis.hpp - scalar invariants of a converged horosphere shape operator:
// the intrinsic scalar curvature from the contracted Gauss equation, the
// eigenvalue-gap functional behind the umbilicity argument, and curvature
// spread diagnostics.
#pragma once

#include <nlohmann/json_fwd.hpp>

#include "horocurv/geometry.hpp"
#include "horocurv/model.hpp"
#include "horocurv/riccati.hpp"

namespace horocurv {

// Everything the per-direction pipeline produces for one unit direction.
struct HorosphereReport {
  Vec direction;             // chart components at the base point
  double s;                  // intrinsic scalar curvature of the horosphere
  Vec principal_curvatures;  // eigenvalues of S(0), ascending
  double umbilicity_deviation;
  double lemma_gap;
  double trace_S;
  double trace_S2;
  double ricci_v;
  double scalar;
  double convergence_gap;

  static std::string csv_header(int dim);
  std::string csv_row() const;
};

void to_json(nlohmann::json& j, const HorosphereReport& r);

// Intrinsic scalar curvature of the horosphere through the base point of v:
//   s = (trace S)^2 - trace(S^2) - 2 Ric(v,v) + Scal.
double gauss_scalar(const Model& model, const TangentVector& v,
                    const ShapeOperator& S);

// sum_i l_i^2 - 1/(n-2) sum_{i != j} l_i l_j over ordered pairs, where the
// tuple holds the n-1 principal curvatures of a hypersurface in dimension n.
// Non-negative for real tuples; zero exactly at equal entries. Requires at
// least two entries (n >= 3).
double lemma_gap(const Vec& lambda);

// Largest pairwise eigenvalue difference of S (0 iff umbilic).
double umbilicity_deviation(const ShapeOperator& S);

// Spread of sectional curvature at p: samples unit directions and takes the
// extreme eigenvalues of the curvature operator at each, i.e. the extremal
// 2-planes through every sampled direction. samples >= 2.
double sectional_spread(const Model& model, const Point& p, int samples,
                        std::uint64_t seed);

// Full per-direction pipeline: Riccati -> Gauss -> eigenvalue functionals.
HorosphereReport analyze_direction(const Model& model, const TangentVector& v,
                                   const RiccatiConfig& cfg);

}  // namespace horocurv
