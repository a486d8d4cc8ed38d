#include "horocurv/geometry.hpp"

#include <cmath>

namespace horocurv {

Mat gram_matrix(const Mat& g, const std::vector<Vec>& vecs) {
  const int m = static_cast<int>(vecs.size());
  Mat gram(m, m);
  for (int i = 0; i < m; ++i) {
    const Vec gi = g * vecs[i];
    for (int j = 0; j < m; ++j) gram(i, j) = gi.dot(vecs[j]);
  }
  return gram;
}

std::vector<Vec> gram_schmidt(const Mat& g, const std::vector<Vec>& fixed,
                              const std::vector<Vec>& vecs,
                              double condition_floor) {
  std::vector<Vec> basis = fixed;  // assumed already g-orthonormal
  std::vector<Vec> out;
  for (const Vec& candidate : vecs) {
    Vec w = candidate;
    const double incoming = metric_norm(g, w);
    if (incoming == 0.0) continue;
    // Two projection passes for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& b : basis) w -= metric_inner(g, b, w) * b;
    }
    const double remaining = metric_norm(g, w);
    if (remaining <= condition_floor * incoming) continue;  // dependent, drop
    w /= remaining;
    basis.push_back(w);
    out.push_back(w);
  }
  return out;
}

double pairwise_sum(const std::vector<double>& values) {
  // Recursive halving on an explicit stack-free pass; the bracketing depends
  // only on the length, so the sum is deterministic.
  std::vector<double> layer = values;
  if (layer.empty()) return 0.0;
  while (layer.size() > 1) {
    std::vector<double> next;
    next.reserve((layer.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2)
      next.push_back(layer[i] + layer[i + 1]);
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    layer = std::move(next);
  }
  return layer[0];
}

}  // namespace horocurv
