#include "sgmix/elements/basis.hpp"

#include <Eigen/LU>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace sgmix {

namespace {

// Reference triangle basis: monomials in t = 3 s - 1 (centered) and their
// coefficient matrix C with phi_j = sum_m C(m, j) t^m.
struct ReferenceBasis {
  int k = 0;
  std::vector<std::pair<int, int>> mono;
  Matrix C;
};

constexpr double kScale = 3.0;
constexpr double kShift = 1.0 / 3.0;

double bernstein(const std::array<int, 3>& a, double l0, double l1, double l2, int k) {
  double c = 1.0;
  for (int i = 2; i <= k; ++i) c *= i;
  for (int j = 0; j < 3; ++j)
    for (int i = 2; i <= a[j]; ++i) c /= i;
  return c * std::pow(l0, a[0]) * std::pow(l1, a[1]) * std::pow(l2, a[2]);
}

const ReferenceBasis& reference_basis(int k, BasisType type) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::unique_ptr<ReferenceBasis>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{k, static_cast<int>(type)}];
  if (!slot) {
    auto rb = std::make_unique<ReferenceBasis>();
    rb->k = k;
    for (int n = 0; n <= k; ++n)
      for (int b = 0; b <= n; ++b) rb->mono.emplace_back(n - b, b);
    const auto& nodes = lattice(k);
    const int d = poly_dim(k);
    Matrix V(d, d);
    for (int i = 0; i < d; ++i) {
      const double s1 = static_cast<double>(nodes[i][1]) / k;
      const double s2 = static_cast<double>(nodes[i][2]) / k;
      const double t1 = kScale * (s1 - kShift), t2 = kScale * (s2 - kShift);
      for (int m = 0; m < d; ++m) V(i, m) = std::pow(t1, rb->mono[m].first) * std::pow(t2, rb->mono[m].second);
    }
    rb->C = V.fullPivLu().inverse();
    if (type == BasisType::Bernstein) {
      // Lagrange interpolation of each Bernstein polynomial is exact.
      Matrix Bm(d, d);
      for (int i = 0; i < d; ++i) {
        const double l1 = static_cast<double>(nodes[i][1]) / k, l2 = static_cast<double>(nodes[i][2]) / k;
        for (int j = 0; j < d; ++j) Bm(i, j) = bernstein(nodes[j], 1.0 - l1 - l2, l1, l2, k);
      }
      rb->C = rb->C * Bm;
    }
    slot = std::move(rb);
  }
  return *slot;
}

double falling(int n, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= (n - i);
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

const std::vector<std::array<int, 3>>& lattice(int k) {
  require(k >= 1 && k <= kMaxBasisDegree, "polynomial degree " + std::to_string(k) + " out of supported range [1, " +
                                              std::to_string(kMaxBasisDegree) + "]");
  static std::mutex mtx;
  static std::map<int, std::vector<std::array<int, 3>>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<std::array<int, 3>> nodes;
  for (int a2 = 0; a2 <= k; ++a2)
    for (int a1 = 0; a1 + a2 <= k; ++a1) nodes.push_back({k - a1 - a2, a1, a2});
  return cache.emplace(k, std::move(nodes)).first->second;
}

ElementBasis::ElementBasis(int k, const Vec2& a, const Vec2& b, const Vec2& c, BasisType type)
    : k_(k), type_(type), v_{a, b, c} {
  lattice(k);  // validates k
  Mat2 J;
  J.col(0) = b - a;
  J.col(1) = c - a;
  require(std::abs(J.determinant()) > 0.0, "degenerate element");
  A_ = J.inverse();
}

Matrix ElementBasis::eval(const Vec2& x, int order) const {
  require(order >= 0 && order <= k_ + 1, "derivative order out of range");
  const ReferenceBasis& rb = reference_basis(k_, type_);
  const Vec2 s = A_ * (x - v_[0]);
  const double t1 = kScale * (s(0) - kShift), t2 = kScale * (s(1) - kShift);
  const int d = poly_dim(k_);
  const int nd = poly_dim(order);

  // Powers of t.
  std::vector<double> p1(k_ + 1, 1.0), p2(k_ + 1, 1.0);
  for (int i = 1; i <= k_; ++i) {
    p1[i] = p1[i - 1] * t1;
    p2[i] = p2[i - 1] * t2;
  }
  // Reference derivatives d^(a+b)/ds1^a ds2^b of the monomials.
  Matrix Dm = Matrix::Zero(nd, d);
  for (int n = 0; n <= order; ++n) {
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      const double sc = std::pow(kScale, n);
      for (int m = 0; m < d; ++m) {
        const auto [e1, e2] = rb.mono[m];
        if (e1 < a || e2 < b) continue;
        Dm(deriv_index(a, b), m) = sc * falling(e1, a) * falling(e2, b) * p1[e1 - a] * p2[e2 - b];
      }
    }
  }
  const Matrix Dref = Dm * rb.C;
  if (order == 0) return Dref;

  // d/dx_j = sum_i A(i, j) d/ds_i, expanded binomially per derivative order.
  Matrix T = Matrix::Zero(nd, nd);
  const double a11 = A_(0, 0), a21 = A_(1, 0), a12 = A_(0, 1), a22 = A_(1, 1);
  for (int n = 0; n <= order; ++n) {
    for (int q = 0; q <= n; ++q) {
      const int p = n - q;
      const int row = deriv_index(p, q);
      for (int i = 0; i <= p; ++i) {
        for (int j = 0; j <= q; ++j) {
          const double c = binom(p, i) * binom(q, j) * std::pow(a11, i) * std::pow(a21, p - i) * std::pow(a12, j) *
                           std::pow(a22, q - j);
          T(row, deriv_index(i + j, n - i - j)) += c;
        }
      }
    }
  }
  return T * Dref;
}

Matrix basis_eval(int k, const Vec3& bary, int order, const std::array<Vec2, 3>& verts) {
  require(k >= 1 && k <= kMaxBasisDegree, "polynomial degree out of supported range");
  require(order >= 0 && order <= 3, "derivative order must be 0..3");
  ElementBasis eb(k, verts[0], verts[1], verts[2]);
  return eb.eval_bary(bary, order);
}

}  // namespace sgmix
