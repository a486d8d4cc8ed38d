#include "horocurv/liouville.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "horocurv/errors.hpp"
#include "horocurv/parallel.hpp"
#include "horocurv/rng.hpp"

namespace horocurv {

SphereSampler::SphereSampler(const Model& model, Point base,
                             std::uint64_t seed)
    : model_(model), base_(std::move(base)), seed_(seed) {
  const Mat g = metric_at(model_, base_);
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "metric at the sampling base is not positive definite");
  chol_upper_ = llt.matrixU();
}

TangentVector SphereSampler::sample(std::uint64_t index) const {
  CounterRng rng(seed_, index);
  const int n = model_.dim();
  Vec z(n);
  do {
    for (int i = 0; i < n; ++i) z[i] = rng.next_gaussian();
  } while (z.norm() < 1e-8);
  // g = U^T U, so u = U^{-1} z has E[u u^T] proportional to g^{-1}: the
  // direction u/|u|_g is uniform on the g-unit sphere.
  Vec u = chol_upper_.triangularView<Eigen::Upper>().solve(z);
  const Mat g = metric_at(model_, base_);
  const double norm = metric_norm(g, u);
  TangentVector out;
  out.base = base_;
  out.v = u / norm;
  return out;
}

MonteCarloEstimate sphere_average(
    const Model& model, const Point& base, std::uint64_t seed,
    std::uint64_t count,
    const std::function<double(const TangentVector&)>& f) {
  if (count == 0)
    throw std::invalid_argument("sphere_average needs at least one sample");
  const SphereSampler sampler(model, base, seed);
  std::vector<double> values(count, 0.0);
  parallel_for(count, [&](std::uint64_t i) {
    values[i] = f(sampler.sample(i));
  });

  MonteCarloEstimate est;
  est.count = count;
  est.seed = seed;
  est.mean = pairwise_sum(values) / static_cast<double>(count);
  if (count >= 2) {
    std::vector<double> sq(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double d = values[i] - est.mean;
      sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / static_cast<double>(count - 1);
    est.std_error = std::sqrt(var / static_cast<double>(count));
  }
  return est;
}

double verify_integrated_identity(const Model& model, const Point& base,
                                  std::uint64_t seed, std::uint64_t count,
                                  const RiccatiConfig& cfg) {
  if (!model.locally_symmetric())
    throw CapabilityError(
        "the integrated identity compares against a direction-independent "
        "scalar curvature; model '" +
        model.name() + "' is not locally symmetric");
  const MonteCarloEstimate est = sphere_average(
      model, base, seed, count, [&](const TangentVector& v) {
        const RiccatiRun run = stable_shape_operator(model, v, cfg);
        return (run.S0.matrix * run.S0.matrix).trace();
      });
  const SphereSampler sampler(model, base, seed);
  const RicciScalar rs = ricci_and_scalar(model, sampler.sample(0));
  return std::abs(est.mean + rs.scalar / static_cast<double>(model.dim()));
}

double flow_derivative_check(const RiccatiRun& run) {
  const double window = std::min(2.0, run.horizon / 2.0);
  const long last = static_cast<long>(run.trajectory.size()) - 1;
  if (last < 2)
    throw std::invalid_argument("trajectory too short for a derivative check");
  long first = last - std::llround(window / run.step);
  if (first < 1) first = 1;
  double worst = 0.0;
  for (long i = first; i <= last - 1; ++i) {
    const double ddt =
        (run.trajectory[i + 1].trace_S - run.trajectory[i - 1].trace_S) /
        (2.0 * run.step);
    worst = std::max(worst, std::abs(ddt));
  }
  return worst;
}

}  // namespace horocurv
