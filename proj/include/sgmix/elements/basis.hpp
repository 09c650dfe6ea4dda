#pragma once

#include "sgmix/common.hpp"

#include <array>
#include <vector>

namespace sgmix {

constexpr int kMaxBasisDegree = 12;

inline int poly_dim(int k) { return (k + 1) * (k + 2) / 2; }

/// Row of the derivative d^(p+q) / dx^p dy^q in the matrices returned by
/// ElementBasis::eval: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
inline int deriv_index(int p, int q) {
  const int n = p + q;
  return n * (n + 1) / 2 + q;
}

/// Lagrange nodes of degree k as barycentric multi-indices (sum k).
const std::vector<std::array<int, 3>>& lattice(int k);

/// Nodal Lagrange basis, or Bernstein basis k!/alpha! lambda^alpha, indexed
/// by the same lattice. Bernstein functions of a node with alpha_i < k - r
/// vanish to order r at vertex i, which keeps vertex jets local.
enum class BasisType { Lagrange, Bernstein };

/// Degree-k basis on an affine triangle, evaluated in physical coordinates
/// with derivatives of any order.
class ElementBasis {
 public:
  ElementBasis() = default;
  ElementBasis(int k, const Vec2& a, const Vec2& b, const Vec2& c, BasisType type = BasisType::Lagrange);

  int degree() const { return k_; }
  int size() const { return poly_dim(k_); }

  /// Rows: derivatives up to `order` (see deriv_index); columns: basis functions.
  Matrix eval(const Vec2& x, int order) const;
  Matrix eval_bary(const Vec3& bary, int order) const { return eval(point(bary), order); }
  Vec2 point(const Vec3& bary) const { return bary(0) * v_[0] + bary(1) * v_[1] + bary(2) * v_[2]; }
  const std::array<Vec2, 3>& vertices() const { return v_; }

 private:
  int k_ = 0;
  BasisType type_ = BasisType::Lagrange;
  std::array<Vec2, 3> v_;
  Mat2 A_;  // reference coordinates s = A (x - v0)
};

/// Values (order 0) and physical derivatives up to `order` of the degree-k
/// Lagrange basis at a barycentric point of the triangle `verts`.
Matrix basis_eval(int k, const Vec3& bary, int order, const std::array<Vec2, 3>& verts);

}  // namespace sgmix
