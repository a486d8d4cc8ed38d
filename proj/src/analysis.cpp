#include "horocurv/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "horocurv/rng.hpp"

namespace horocurv {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string HorosphereReport::csv_header(int dim) {
  std::string h;
  for (int i = 0; i < dim; ++i) h += "direction_" + std::to_string(i) + ",";
  h += "s,";
  for (int i = 0; i < dim - 1; ++i)
    h += "principal_curvature_" + std::to_string(i) + ",";
  h +=
      "umbilicity_deviation,lemma_gap,trace_S,trace_S2,ricci_v,scalar,"
      "convergence_gap";
  return h;
}

std::string HorosphereReport::csv_row() const {
  std::string row;
  for (Eigen::Index i = 0; i < direction.size(); ++i)
    row += num(direction[i]) + ",";
  row += num(s) + ",";
  for (Eigen::Index i = 0; i < principal_curvatures.size(); ++i)
    row += num(principal_curvatures[i]) + ",";
  row += num(umbilicity_deviation) + "," + num(lemma_gap) + "," +
         num(trace_S) + "," + num(trace_S2) + "," + num(ricci_v) + "," +
         num(scalar) + "," + num(convergence_gap);
  return row;
}

void to_json(nlohmann::json& j, const HorosphereReport& r) {
  j = nlohmann::json{
      {"direction",
       std::vector<double>(r.direction.data(),
                           r.direction.data() + r.direction.size())},
      {"s", r.s},
      {"principal_curvatures",
       std::vector<double>(
           r.principal_curvatures.data(),
           r.principal_curvatures.data() + r.principal_curvatures.size())},
      {"umbilicity_deviation", r.umbilicity_deviation},
      {"lemma_gap", r.lemma_gap},
      {"trace_S", r.trace_S},
      {"trace_S2", r.trace_S2},
      {"ricci_v", r.ricci_v},
      {"scalar", r.scalar},
      {"convergence_gap", r.convergence_gap},
  };
}

double gauss_scalar(const Model& model, const TangentVector& v,
                    const ShapeOperator& S) {
  const RicciScalar rs = ricci_and_scalar(model, v);
  const double tr = S.matrix.trace();
  const double tr2 = (S.matrix * S.matrix).trace();
  return tr * tr - tr2 - 2.0 * rs.ricci + rs.scalar;
}

double lemma_gap(const Vec& lambda) {
  const Eigen::Index m = lambda.size();  // n - 1 principal curvatures
  if (m < 2)
    throw std::invalid_argument(
        "the eigenvalue-gap functional needs at least two entries");
  const double sum = lambda.sum();
  const double sum_sq = lambda.squaredNorm();
  const double off_diagonal = sum * sum - sum_sq;  // sum over ordered i != j
  return sum_sq - off_diagonal / static_cast<double>(m - 1);
}

double umbilicity_deviation(const ShapeOperator& S) {
  const Vec ev = S.eigenvalues();
  return ev[ev.size() - 1] - ev[0];
}

double sectional_spread(const Model& model, const Point& p, int samples,
                        std::uint64_t seed) {
  if (samples < 2)
    throw std::invalid_argument("sectional_spread needs at least two samples");
  CounterRng rng(seed, 0);
  const int n = model.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Vec z(n);
    do {
      for (int i = 0; i < n; ++i) z[i] = rng.next_gaussian();
    } while (z.norm() < 1e-8);
    const TangentVector v = unit_vector(model, p, z);
    const std::vector<Vec> frame = seed_frame(model, v);
    const Mat M = curvature_operator(model, v, frame);
    Eigen::SelfAdjointEigenSolver<Mat> solver(M);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigenvalue decomposition failed");
    lo = std::min(lo, solver.eigenvalues()[0]);
    hi = std::max(hi, solver.eigenvalues()[n - 2]);
  }
  return hi - lo;
}

HorosphereReport analyze_direction(const Model& model, const TangentVector& v,
                                   const RiccatiConfig& cfg) {
  const RiccatiRun run = stable_shape_operator(model, v, cfg);
  const RicciScalar rs = ricci_and_scalar(model, v);

  HorosphereReport r;
  r.direction = v.v;
  r.principal_curvatures = run.S0.eigenvalues();
  r.trace_S = run.S0.matrix.trace();
  r.trace_S2 = (run.S0.matrix * run.S0.matrix).trace();
  r.ricci_v = rs.ricci;
  r.scalar = rs.scalar;
  r.s = r.trace_S * r.trace_S - r.trace_S2 - 2.0 * rs.ricci + rs.scalar;
  r.umbilicity_deviation = umbilicity_deviation(run.S0);
  r.lemma_gap = lemma_gap(r.principal_curvatures);
  r.convergence_gap = run.convergence_gap;
  return r;
}

}  // namespace horocurv
