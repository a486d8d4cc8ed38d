#include "horocurv/finite_diff.hpp"

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "horocurv/model.hpp"

namespace horocurv {
namespace fd {

namespace {

Point shifted(const Point& p, int axis, double delta) {
  Point q = p;
  q.x[axis] += delta;
  return q;
}

void require_stencil_in_domain(const Model& model, const Point& p, double h) {
  const int n = model.dim();
  for (int a = 0; a < n; ++a) {
    if (!model.in_domain(shifted(p, a, +h)) ||
        !model.in_domain(shifted(p, a, -h)))
      throw std::domain_error(
          "finite-difference stencil leaves the chart domain");
  }
}

}  // namespace

Tensor3 christoffel_from_metric(const Model& model, const Point& p, double h) {
  const int n = model.dim();
  require_stencil_in_domain(model, p, h);

  // d_a g at p, one central difference per axis.
  std::vector<Mat> dg(n);
  for (int a = 0; a < n; ++a) {
    dg[a] = (model.metric(shifted(p, a, +h)) - model.metric(shifted(p, a, -h))) /
            (2.0 * h);
  }

  const Mat g_inv = model.metric(p).inverse();
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += g_inv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        gamma(i, j, k) = 0.5 * sum;
        gamma(i, k, j) = gamma(i, j, k);  // symmetric by construction
      }
  return gamma;
}

Vec riemann_from_christoffel(const Model& model, const Point& p, const Vec& u,
                             const Vec& v, const Vec& w, double h) {
  const int n = model.dim();
  require_stencil_in_domain(model, p, h);

  const Tensor3 gamma = model.christoffel(p);
  // dgamma[a](i,j,k) = d_a Gamma^i_{jk}
  std::vector<Tensor3> dgamma;
  dgamma.reserve(n);
  for (int a = 0; a < n; ++a) {
    const Tensor3 plus = model.christoffel(shifted(p, a, +h));
    const Tensor3 minus = model.christoffel(shifted(p, a, -h));
    Tensor3 d(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          d(i, j, k) = (plus(i, j, k) - minus(i, j, k)) / (2.0 * h);
    dgamma.push_back(std::move(d));
  }

  // Contract R^l_{kij} u^i v^j w^k in stages: first the derivative terms,
  // then the quadratic Gamma*Gamma terms through intermediate vectors.
  Vec out = Vec::Zero(n);
  Vec gamma_vw = Vec::Zero(n);  // Gamma^m_{jk} v^j w^k
  Vec gamma_uw = Vec::Zero(n);  // Gamma^m_{ik} u^i w^k
  for (int m = 0; m < n; ++m) {
    double svw = 0.0, suw = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        svw += gamma(m, j, k) * v[j] * w[k];
        suw += gamma(m, j, k) * u[j] * w[k];
      }
    gamma_vw[m] = svw;
    gamma_uw[m] = suw;
  }
  for (int l = 0; l < n; ++l) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double djk = 0.0, dik = 0.0;
        for (int k = 0; k < n; ++k) {
          djk += dgamma[i](l, j, k) * w[k];
          dik += dgamma[j](l, i, k) * w[k];
        }
        acc += (djk - dik) * u[i] * v[j];
      }
    for (int m = 0; m < n; ++m) {
      double gum = 0.0, gvm = 0.0;
      for (int i = 0; i < n; ++i) {
        gum += gamma(l, i, m) * u[i];
        gvm += gamma(l, i, m) * v[i];
      }
      acc += gum * gamma_vw[m] - gvm * gamma_uw[m];
    }
    out[l] = acc;
  }
  return out;
}

}  // namespace fd
}  // namespace horocurv
