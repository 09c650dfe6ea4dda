#include "sgmix/elements/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace sgmix {

void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& x, std::vector<double>& w) {
  require(n >= 1, "gauss_jacobi needs at least one node");
  require(alpha > -1.0 && beta > -1.0, "gauss_jacobi exponents must exceed -1");
  // Golub-Welsch on the symmetric Jacobi matrix of the monic recurrence.
  Matrix J = Matrix::Zero(n, n);
  const double ab = alpha + beta;
  for (int i = 0; i < n; ++i) {
    const double d = 2.0 * i + ab;
    J(i, i) = i == 0 ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (d * (d + 2.0));
    if (i + 1 < n) {
      const double k = i + 1.0;
      const double dk = 2.0 * k + ab;
      const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
      const double den = dk * dk * (dk + 1.0) * (dk - 1.0);
      J(i, i + 1) = J(i + 1, i) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = mu0 * v * v;
  }
}

namespace {

QuadratureRule build_rule(int degree) {
  const int n = (degree + 2) / 2;  // 2n - 1 >= degree
  std::vector<double> xa, wa, xl, wl;
  gauss_jacobi(n, 1.0, 0.0, xa, wa);
  gauss_jacobi(n, 0.0, 0.0, xl, wl);
  QuadratureRule r;
  r.degree = degree;
  // Reference triangle (0,0),(1,0),(0,1) with area 1/2:
  // int_T f = int_0^1 int_0^1 f(u, (1 - u) v) (1 - u) dv du.
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 + xa[i]);
    const double wu = 0.25 * wa[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (1.0 + xl[j]);
      const double wv = 0.5 * wl[j];
      const double s = u;
      const double t = (1.0 - u) * v;
      r.points.emplace_back(1.0 - s - t, s, t);
      r.weights.push_back(2.0 * wu * wv);
    }
  }
  return r;
}

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
  require(degree >= 1 && degree <= kMaxQuadratureDegree,
          "quadrature degree " + std::to_string(degree) + " out of supported range [1, " +
              std::to_string(kMaxQuadratureDegree) + "]");
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[degree];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_rule(degree));
  return *slot;
}

}  // namespace sgmix
