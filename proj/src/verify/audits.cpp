#include "sgmix/verify/audits.hpp"

#include "sgmix/elements/basis.hpp"
#include "sgmix/elements/quadrature.hpp"
#include "sgmix/mesh/generators.hpp"
#include "sgmix/spaces/fe_space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace sgmix {

int sigma2_dim_formula(int k, int nt, int ne, int nv) {
  return (3 * (k + 2) * (k + 1) / 2 - 9 * (k + 1)) * nt + (3 * k - 15) * ne + 18 * nv;
}

int q1_dim_formula(int k, int nt, int nv) { return (k * (k + 1) - 18) * nt + 6 * nv; }

int u4_dim_formula(int k, int nt, int ne, int nv) {
  return (k - 6) * (k - 5) / 2 * nt + (3 * k - 18) * ne + 15 * nv;
}

nlohmann::json DimensionAudit::to_json() const {
  return {{"k", k},
          {"T", num_triangles},
          {"E", num_edges},
          {"V", num_vertices},
          {"sigma_dim", sigma_dim},
          {"sigma_formula", sigma_formula},
          {"q_dim", q_dim},
          {"q_formula", q_formula},
          {"u_formula", u_formula},
          {"alternating_sum", alternating_sum},
          {"contractible", contractible},
          {"ok", ok}};
}

DimensionAudit dimension_audit(std::shared_ptr<const Triangulation> mesh, int k) {
  DimensionAudit a;
  a.k = k;
  a.num_triangles = mesh->num_triangles();
  a.num_edges = mesh->num_edges();
  a.num_vertices = mesh->num_vertices();
  a.sigma_dim = FESpace::stress(mesh, k, 2).dim();
  a.q_dim = FESpace::displacement(mesh, k, 1).dim();
  a.sigma_formula = sigma2_dim_formula(k, a.num_triangles, a.num_edges, a.num_vertices);
  a.q_formula = q1_dim_formula(k, a.num_triangles, a.num_vertices);
  a.u_formula = u4_dim_formula(k, a.num_triangles, a.num_edges, a.num_vertices);
  a.alternating_sum = a.u_formula - a.sigma_dim + a.q_dim;
  // Triangulations are edge-connected, so Euler characteristic 1 means contractible.
  a.contractible = a.num_vertices - a.num_edges + a.num_triangles == 1;
  a.ok = a.sigma_dim == a.sigma_formula && a.q_dim == a.q_formula && (!a.contractible || a.alternating_sum == 3);
  return a;
}

namespace {

// Coefficient nullspace of scalar degree-n polynomials whose derivatives of
// order <= edge_order vanish on the boundary and of order <= vertex_order at
// the vertices.
Matrix scalar_bubbles(const ElementBasis& eb, int edge_order, int vertex_order) {
  const int n = eb.degree();
  std::vector<Eigen::RowVectorXd> rows;
  auto add = [&](const Matrix& D, int order) {
    for (int r = 0; r < poly_dim(order); ++r) {
      const double nr = D.row(r).norm();
      if (nr > 0) rows.push_back(D.row(r) / nr);
    }
  };
  const auto& v = eb.vertices();
  for (int i = 0; i < 3; ++i) {
    add(eb.eval(v[i], vertex_order), vertex_order);
    if (edge_order < 0) continue;
    for (int j = 0; j <= n; ++j) {
      const double s = (j + 0.5) / (n + 1);
      add(eb.eval((1 - s) * v[i] + s * v[(i + 1) % 3], edge_order), edge_order);
    }
  }
  Matrix C(rows.size(), eb.size());
  for (std::size_t r = 0; r < rows.size(); ++r) C.row(r) = rows[r];
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > 1e-9 * s(0)) ++rank;
  return svd.matrixV().rightCols(eb.size() - rank);
}

int numerical_rank(const Matrix& A) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > 1e-9 * s(0)) ++r;
  return r;
}

}  // namespace

nlohmann::json BubbleAudit::to_json() const {
  return {{"k", k},
          {"dims", {dim_u, dim_sigma, dim_q}},
          {"expected", {expected_u, expected_sigma, expected_q}},
          {"rank_div", rank_div},
          {"kernel_dim", kernel_dim},
          {"rm_moment", rm_moment},
          {"ok", ok}};
}

BubbleAudit bubble_complex_audit(int k, int samples, std::uint64_t seed) {
  require(k >= 7 && k <= 8, "bubble audit needs 7 <= k <= 8");
  const Triangulation ref = single_triangle();
  const auto& tv = ref.triangle(0);
  const Vec2 a = ref.vertex(tv[0]), b = ref.vertex(tv[1]), c = ref.vertex(tv[2]);
  const ElementBasis bu(k + 2, a, b, c, BasisType::Bernstein);
  const ElementBasis bs(k, a, b, c, BasisType::Bernstein);
  const ElementBasis bq(k - 1, a, b, c, BasisType::Bernstein);

  const Matrix Nu = scalar_bubbles(bu, 2, 2);
  const Matrix Ns = scalar_bubbles(bs, 0, 2);
  const Matrix Nq = scalar_bubbles(bq, -1, 1);

  BubbleAudit r;
  r.k = k;
  r.dim_u = static_cast<int>(Nu.cols());
  r.dim_sigma = 3 * static_cast<int>(Ns.cols());
  r.dim_q = 2 * static_cast<int>(Nq.cols());
  r.expected_u = (k - 6) * (k - 5) / 2;
  r.expected_sigma = 3 * (k + 2) * (k + 1) / 2 - 9 * (k - 5) - 54;
  r.expected_q = k * (k + 1) - 18;

  // (q_a, div sigma_i); stress components (11, 12, 22), q components (1, 2).
  const int ns = static_cast<int>(Ns.cols()), nq = static_cast<int>(Nq.cols());
  const QuadratureRule& rule = quadrature_rule(2 * k);
  const double area = ref.area(0);
  Matrix Gx = Matrix::Zero(nq, ns), Gy = Matrix::Zero(nq, ns), Mq = Matrix::Zero(nq, nq);
  Eigen::Matrix3d Mrm = Eigen::Matrix3d::Zero();
  Matrix Px = Matrix::Zero(6, ns), Py = Matrix::Zero(6, ns);  // rows: RM mode m, component j -> 2m + j
  for (int i = 0; i < rule.size(); ++i) {
    const Vec2 x = bs.point(rule.points[i]);
    const double w = area * rule.weights[i];
    const Matrix Ds = bs.eval(x, 1);
    const Eigen::RowVectorXd sx = Ds.row(1) * Ns, sy = Ds.row(2) * Ns;
    const Eigen::RowVectorXd qv = bq.eval(x, 0).row(0) * Nq;
    Gx.noalias() += w * qv.transpose() * sx;
    Gy.noalias() += w * qv.transpose() * sy;
    Mq.noalias() += w * qv.transpose() * qv;
    const Vec2 p[3] = {Vec2(1, 0), Vec2(0, 1), Vec2(-x.y(), x.x())};
    for (int m = 0; m < 3; ++m) {
      for (int j = 0; j < 2; ++j) {
        Px.row(2 * m + j) += w * p[m](j) * sx;
        Py.row(2 * m + j) += w * p[m](j) * sy;
      }
      for (int l = 0; l < 3; ++l) Mrm(m, l) += w * p[m].dot(p[l]);
    }
  }
  // B = [[Gx, Gy, 0], [0, Gx, Gy]] over blocks (q1, q2) x (s11, s12, s22).
  Matrix B = Matrix::Zero(2 * nq, 3 * ns);
  B.block(0, 0, nq, ns) = Gx;
  B.block(0, ns, nq, ns) = Gy;
  B.block(nq, ns, nq, ns) = Gx;
  B.block(nq, 2 * ns, nq, ns) = Gy;
  r.rank_div = numerical_rank(B);
  r.kernel_dim = r.dim_sigma - r.rank_div;

  // RM moments of div sigma for random bubbles.
  Matrix Mq2 = Matrix::Zero(2 * nq, 2 * nq);
  Mq2.topLeftCorner(nq, nq) = Mq;
  Mq2.bottomRightCorner(nq, nq) = Mq;
  const Eigen::LDLT<Matrix> mq_solver(Mq2);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < samples; ++s) {
    Vector x(3 * ns);
    for (int i = 0; i < x.size(); ++i) x(i) = normal(rng);
    x.normalize();
    const Vector s11 = x.segment(0, ns), s12 = x.segment(ns, ns), s22 = x.segment(2 * ns, ns);
    // div sigma lies in the Q bubble space, so its L2 norm follows from the projection.
    const Vector bq_vec = B * x;
    const double div_norm = std::sqrt(bq_vec.dot(mq_solver.solve(bq_vec)));
    for (int m = 0; m < 3; ++m) {
      const double moment =
          (Px.row(2 * m) * s11 + Py.row(2 * m) * s12 + Px.row(2 * m + 1) * s12 + Py.row(2 * m + 1) * s22)(0);
      r.rm_moment = std::max(r.rm_moment, std::abs(moment) / (div_norm * std::sqrt(Mrm(m, m))));
    }
  }
  r.ok = r.dim_u == r.expected_u && r.dim_sigma == r.expected_sigma && r.dim_q == r.expected_q &&
         r.rank_div == r.dim_q - 3 && r.kernel_dim == r.dim_u && r.rm_moment <= 1e-11;
  return r;
}

}  // namespace sgmix
