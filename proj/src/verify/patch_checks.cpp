#include "sgmix/verify/patch_checks.hpp"

#include "sgmix/elements/tensor.hpp"
#include "sgmix/spaces/field.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace sgmix {

namespace {

struct Barycentric {
  Vec2 grad;
  double c = 0.0;
  double operator()(const Vec2& x) const { return grad.dot(x) + c; }
};

// Affine function equal to 1 at p and 0 at q, r.
Barycentric barycentric(const Vec2& p, const Vec2& q, const Vec2& r) {
  const Vec2 e = r - q;
  Vec2 g(-e.y(), e.x());
  g /= g.dot(p - q);
  return {g, -g.dot(q)};
}

Vec2 div_phi(const Barycentric& lz, const Barycentric& lp, const Barycentric& lm, const Mat2& M, const Vec2& x) {
  const double z = lz(x), p = lp(x), m = lm(x);
  const Vec2 grad = 2.0 * z * p * m * lz.grad + z * z * m * lp.grad + z * z * p * lm.grad;
  return M * grad;
}

double rel(const Mat2& a, const Mat2& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

}  // namespace

nlohmann::json NzTCheck::to_json() const {
  return {{"closed_form_error", closed_form_error}, {"annihilation", annihilation}, {"gram_det", gram_det}};
}

NzTCheck nzt_basis_check(const Triangulation& mesh, const VertexStar& star, int e) {
  require(e >= 0 && e < star.m(), "element not in star");
  const int rm = star.ray_minus(e), rp = star.ray_plus(e);
  const Vec2 z = star.z;
  const Vec2 ym = mesh.vertices()[star.ray_vertex[rm]];
  const Vec2 yp = mesh.vertices()[star.ray_vertex[rp]];
  const Barycentric lz = barycentric(z, ym, yp), lp = barycentric(yp, z, ym), lm = barycentric(ym, z, yp);
  const Vec2 &tm = star.t[rm], &tp = star.t[rp];
  const Vec2 nm = -star.n[rm], np = -star.n[rp];
  const std::array<Mat2, 3> M = {tm * tm.transpose(), tp * tp.transpose(),
                                 tm * tp.transpose() + tp * tm.transpose()};
  const double s = std::sin(star.theta[e]) / (star.h_plus[e] * star.h_minus[e]);

  NzTCheck c;
  c.closed_form = {s * nm * tm.transpose(), -s * np * tp.transpose(),
                   s * (nm * tp.transpose() - np * tm.transpose())};
  // Fourth-order central differences in each direction; row i holds d_i.
  const double h = 1e-3 * std::min(star.h_minus[e], star.h_plus[e]);
  for (int i = 0; i < 3; ++i) {
    Mat2 G;
    for (int d = 0; d < 2; ++d) {
      const Vec2 dir = Vec2::Unit(d) * h;
      const Vec2 v = (-div_phi(lz, lp, lm, M[i], z + 2 * dir) + 8 * div_phi(lz, lp, lm, M[i], z + dir) -
                      8 * div_phi(lz, lp, lm, M[i], z - dir) + div_phi(lz, lp, lm, M[i], z - 2 * dir)) /
                     (12 * h);
      G.row(d) = v.transpose();
    }
    c.numeric[i] = G;
    c.closed_form_error = std::max(c.closed_form_error, rel(G, c.closed_form[i]));
  }
  const Mat2 J = tp * star.n[rm].transpose() + tm * star.n[rp].transpose();
  Eigen::Matrix<double, 4, 3> V;
  for (int i = 0; i < 3; ++i) {
    const Mat2& G = c.numeric[i];
    c.annihilation = std::max(c.annihilation, std::abs(ddot(J, G)) / G.norm());
    V.col(i) = Eigen::Map<const Eigen::Vector4d>(G.data()) / G.norm();
  }
  c.gram_det = (V.transpose() * V).determinant();
  return c;
}

nlohmann::json ProbeResult::to_json() const {
  return {{"vertex", vertex},   {"functional", to_string(kind)}, {"component", component},
          {"samples", samples}, {"max_abs", max_abs},           {"max_relative", max_relative}};
}

ProbeResult necessary_condition_probe(std::shared_ptr<const Triangulation> mesh, int vertex, PairKind pair, int k,
                                      FunctionalKind kind, int component, int samples, std::uint64_t seed) {
  const VertexStar star = build_star(*mesh, vertex);
  const JetFunctional F = jet_functional(star, kind, component);
  const FESpace sigma = FESpace::stress(mesh, k, stress_smoothness(pair));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ProbeResult r{vertex, kind, component, samples, 0.0, 0.0};
  for (int s = 0; s < samples; ++s) {
    Vector x(sigma.dim());
    for (int i = 0; i < x.size(); ++i) x(i) = normal(rng);
    const DiscreteField tau(sigma, x);
    std::vector<Eigen::Matrix<double, 3, 2>> jets;
    double scale = 0.0;
    for (std::size_t e = 0; e < F.triangles.size(); ++e) {
      const Matrix D = tau.eval(F.triangles[e], star.z, 2);
      // columns (11, 12, 22); div tau = (d_x s11 + d_y s12, d_x s12 + d_y s22)
      Eigen::Matrix<double, 3, 2> J;
      const int dx = deriv_index(1, 0), dy = deriv_index(0, 1);
      const int rows[3][2] = {{dx, dy}, {deriv_index(2, 0), deriv_index(1, 1)}, {deriv_index(1, 1), deriv_index(0, 2)}};
      for (int d = 0; d < 3; ++d) {
        J(d, 0) = D(rows[d][0], 0) + D(rows[d][1], 1);
        J(d, 1) = D(rows[d][0], 1) + D(rows[d][1], 2);
      }
      jets.push_back(J);
      scale += F.weights[e].norm() * J.norm();
    }
    const double v = std::abs(F.apply(jets));
    r.max_abs = std::max(r.max_abs, v);
    if (scale > 0) r.max_relative = std::max(r.max_relative, v / scale);
  }
  return r;
}

}  // namespace sgmix
