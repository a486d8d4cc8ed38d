// geometry.hpp - chart-level primitives shared by every module: points, tangent
// vectors, rank-3 coefficient arrays, and metric-aware linear algebra helpers.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace horocurv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A point in chart coordinates. Models interpret the coordinates (half-space
// charts put the height last; the complex-hyperbolic ball interleaves real and
// imaginary parts).
struct Point {
  Vec x;

  Point() = default;
  explicit Point(Vec coords) : x(std::move(coords)) {}
  int dim() const { return static_cast<int>(x.size()); }
};

// A tangent vector attached to a base point, expressed in chart components.
struct TangentVector {
  Point base;
  Vec v;

  int dim() const { return static_cast<int>(v.size()); }
};

// Christoffel coefficients Gamma^i_{jk}: first index raised, symmetric in the
// two lower slots. Stored flat, row-major in (i, j, k).
class Tensor3 {
 public:
  Tensor3() : n_(0) {}
  explicit Tensor3(int n) : n_(n), a_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return a_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return a_[idx(i, j, k)]; }

  const double* data() const { return a_.data(); }
  double* data() { return a_.data(); }

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  int n_;
  std::vector<double> a_;
};

// <a, b>_g = a^T g b.
inline double metric_inner(const Mat& g, const Vec& a, const Vec& b) {
  return a.dot(g * b);
}

inline double metric_norm(const Mat& g, const Vec& a) {
  return std::sqrt(std::max(0.0, metric_inner(g, a, a)));
}

// Gram matrix of a list of vectors in the metric g.
Mat gram_matrix(const Mat& g, const std::vector<Vec>& vecs);

// Orthonormalizes `vecs` against `fixed` and each other in the metric g.
// Vectors whose residual after projection falls below `condition_floor`
// (relative to their incoming norm) are dropped. Returns the survivors.
std::vector<Vec> gram_schmidt(const Mat& g, const std::vector<Vec>& fixed,
                              const std::vector<Vec>& vecs,
                              double condition_floor = 1e-8);

// Deterministic pairwise-sum reduction: the result depends only on the order
// of `values`, never on how the values were produced.
double pairwise_sum(const std::vector<double>& values);

}  // namespace horocurv
