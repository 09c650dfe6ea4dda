#pragma once

#include "sgmix/common.hpp"

#include <vector>

namespace sgmix {

constexpr int kMaxQuadratureDegree = 40;

/// Triangle rule in barycentric coordinates; weights sum to one so that
/// the integral over T is |T| * sum_i w_i f(x_i).
struct QuadratureRule {
  int degree = 0;
  std::vector<Vec3> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss nodes and weights for the weight (1 - x)^alpha (1 + x)^beta on [-1, 1].
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& x, std::vector<double>& w);

/// Collapsed (conical product) Gauss-Jacobi rule exact for polynomials of
/// total degree <= degree. Cached; 1 <= degree <= kMaxQuadratureDegree.
const QuadratureRule& quadrature_rule(int degree);

}  // namespace sgmix
