// liouville.hpp - Monte-Carlo surrogate for averages over unit spheres in the
// tangent space, and the integrated flow identities those averages verify on
// locally symmetric models: the mean of trace(S^2) over directions equals
// -Scal/n, and the flow derivative of trace S averages to zero.
#pragma once

#include <cstdint>
#include <functional>

#include "horocurv/geometry.hpp"
#include "horocurv/model.hpp"
#include "horocurv/riccati.hpp"

namespace horocurv {

// Uniform sampler on the g-unit sphere at a base point: standard-normal
// coordinates whitened by the metric Cholesky factor, then normalized.
// Sample i draws from stream i of the counter-based generator, so batches are
// reproducible under any parallel schedule.
class SphereSampler {
 public:
  SphereSampler(const Model& model, Point base, std::uint64_t seed);

  TangentVector sample(std::uint64_t index) const;

  const Point& base() const { return base_; }
  std::uint64_t seed() const { return seed_; }

 private:
  const Model& model_;
  Point base_;
  std::uint64_t seed_;
  Mat chol_upper_;  // U with g = U^T U; whitening solves U u = z
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};

// Mean and standard error of f over `count` sampled unit directions at base.
// Evaluations run index-parallel; the reduction is a deterministic pairwise
// sum, so fixed (seed, count) reproduces the estimate bit-for-bit.
MonteCarloEstimate sphere_average(
    const Model& model, const Point& base, std::uint64_t seed,
    std::uint64_t count, const std::function<double(const TangentVector&)>& f);

// | mean over sampled directions of trace(S(v)^2) + Scal/n | at the base
// point. Only meaningful with constant integrands: throws CapabilityError
// unless model.locally_symmetric().
double verify_integrated_identity(const Model& model, const Point& base,
                                  std::uint64_t seed, std::uint64_t count,
                                  const RiccatiConfig& cfg);

// Max |d/dt trace S| (central differences on the stored trace samples) over
// the converged tail t in [-min(2, T/2), 0]. Vanishes on locally symmetric
// models; on others it is a diagnostic magnitude, not a claim.
double flow_derivative_check(const RiccatiRun& run);

}  // namespace horocurv
