#include "sgmix/system/assembly.hpp"

#include "sgmix/elements/quadrature.hpp"

#include <Eigen/UmfPackSupport>

#include <iomanip>

namespace sgmix {

namespace {

SpMat replicate(const SpMat& S, const FESpace& space, const Eigen::MatrixXd& K) {
  std::vector<Triplet> trip;
  trip.reserve(S.nonZeros() * 5);
  for (int c = 0; c < K.rows(); ++c)
    for (int d = 0; d < K.cols(); ++d) {
      if (K(c, d) == 0.0) continue;
      for (int k = 0; k < S.outerSize(); ++k)
        for (SpMat::InnerIterator it(S, k); it; ++it)
          trip.emplace_back(space.base_index(c, it.row()), space.base_index(d, it.col()), K(c, d) * it.value());
    }
  SpMat M(space.base_dim(), space.base_dim());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

// Scalar element mass and gradient matrices.
void scalar_forms(const FESpace& space, SpMat* M, SpMat* S) {
  const QuadratureRule& rule = quadrature_rule(std::max(1, 2 * space.degree()));
  const Triangulation& m = space.mesh();
  std::vector<Triplet> tm, ts;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& dofs = space.element_dofs(t);
    const ElementBasis& eb = space.basis(t);
    const int n = static_cast<int>(dofs.size());
    Matrix Me = Matrix::Zero(n, n), Se = Matrix::Zero(n, n);
    for (int q = 0; q < rule.size(); ++q) {
      const Matrix D = eb.eval_bary(rule.points[q], 1);
      const double w = rule.weights[q];
      Me.noalias() += w * D.row(0).transpose() * D.row(0);
      Se.noalias() += w * (D.row(1).transpose() * D.row(1) + D.row(2).transpose() * D.row(2));
    }
    const double a = m.area(t);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        tm.emplace_back(dofs[i], dofs[j], a * Me(i, j));
        ts.emplace_back(dofs[i], dofs[j], a * Se(i, j));
      }
  }
  if (M) {
    M->resize(space.scalar_dim(), space.scalar_dim());
    M->setFromTriplets(tm.begin(), tm.end());
  }
  if (S) {
    S->resize(space.scalar_dim(), space.scalar_dim());
    S->setFromTriplets(ts.begin(), ts.end());
  }
}

SpMat reduce(const SpMat& base, const FESpace& left, const FESpace& right) {
  SpMat r = left.N().transpose() * base * right.N();
  r.prune(0.0);
  r.makeCompressed();
  return r;
}

}  // namespace

SpMat assemble_A_base(const FESpace& sigma, const Material& mat, double iota) {
  require(sigma.kind() == SpaceKind::Stress, "A is assembled on a stress space");
  mat.validate();
  require(iota >= 0.0 && std::isfinite(iota), "iota must be non-negative");
  SpMat M, S;
  scalar_forms(sigma, &M, &S);
  const SpMat W = iota * iota * S + M;
  return replicate(W, sigma, compliance_voigt(mat));
}

SpMat assemble_A(const FESpace& sigma, const Material& mat, double iota) {
  return reduce(assemble_A_base(sigma, mat, iota), sigma, sigma);
}

SpMat assemble_B_base(const FESpace& sigma, const FESpace& q) {
  require(sigma.kind() == SpaceKind::Stress && q.kind() == SpaceKind::Displacement,
          "B couples a stress space with a displacement space");
  require(&sigma.mesh() == &q.mesh() || sigma.mesh_ptr() == q.mesh_ptr(), "spaces must share a mesh");
  const Triangulation& m = sigma.mesh();
  const QuadratureRule& rule = quadrature_rule(sigma.degree() + q.degree());
  std::vector<Triplet> trip;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& sd = sigma.element_dofs(t);
    const auto& qd = q.element_dofs(t);
    const int ns = static_cast<int>(sd.size()), nq = static_cast<int>(qd.size());
    Matrix Gx = Matrix::Zero(nq, ns), Gy = Matrix::Zero(nq, ns);
    for (int p = 0; p < rule.size(); ++p) {
      const Vec2 x = sigma.basis(t).point(rule.points[p]);
      const Matrix D = sigma.basis(t).eval(x, 1);
      const Vector psi = q.basis(t).eval(x, 0).row(0).transpose();
      const double w = rule.weights[p];
      Gx.noalias() += w * psi * D.row(1);
      Gy.noalias() += w * psi * D.row(2);
    }
    const double a = m.area(t);
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < ns; ++j) {
        const double gx = a * Gx(i, j), gy = a * Gy(i, j);
        // (div s)_1 = d_x s11 + d_y s12, (div s)_2 = d_x s12 + d_y s22
        trip.emplace_back(q.base_index(0, qd[i]), sigma.base_index(0, sd[j]), gx);
        trip.emplace_back(q.base_index(0, qd[i]), sigma.base_index(1, sd[j]), gy);
        trip.emplace_back(q.base_index(1, qd[i]), sigma.base_index(1, sd[j]), gx);
        trip.emplace_back(q.base_index(1, qd[i]), sigma.base_index(2, sd[j]), gy);
      }
  }
  SpMat B(q.base_dim(), sigma.base_dim());
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

SpMat assemble_B(const FESpace& sigma, const FESpace& q) { return reduce(assemble_B_base(sigma, q), q, sigma); }

Vector assemble_load(const FESpace& q, const VectorFunction& f, int quad_degree) {
  if (quad_degree < 0) quad_degree = 2 * q.k() + 4;
  return q.N().transpose() * base_load(q, f, quad_degree);
}

SpMat reduced_mass(const FESpace& space) {
  SpMat M;
  scalar_forms(space, &M, nullptr);
  return reduce(replicate(M, space, Matrix::Identity(space.num_components(), space.num_components())), space, space);
}

SpMat reduced_h1(const FESpace& space) {
  SpMat M, S;
  scalar_forms(space, &M, &S);
  const int nc = space.num_components();
  return reduce(replicate(SpMat(S + M), space, Matrix::Identity(nc, nc)), space, space);
}

SpMat reduced_h1_gram(const FESpace& space) {
  SpMat M, S;
  scalar_forms(space, &M, &S);
  const int nc = space.num_components();
  SpMat G = replicate(S, space, Matrix::Identity(nc, nc));
  // Mean term: rank-one per component.
  const Vector ones = Vector::Ones(space.scalar_dim());
  const Vector mean = M * ones;
  double area = 0.0;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) area += space.mesh().area(t);
  std::vector<Triplet> trip;
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < mean.size(); ++i) {
      if (mean(i) == 0.0) continue;
      for (int j = 0; j < mean.size(); ++j)
        if (mean(j) != 0.0) trip.emplace_back(space.base_index(c, i), space.base_index(c, j), mean(i) * mean(j) / area);
    }
  SpMat R(space.base_dim(), space.base_dim());
  R.setFromTriplets(trip.begin(), trip.end());
  return reduce(SpMat(G + R), space, space);
}

SaddleSolution solve_saddle(const SpMat& A, const SpMat& B, const Vector& F, double tol) {
  return solve_saddle(A, B, Vector::Zero(A.rows()), F, tol);
}

SaddleSolver::SaddleSolver(const SpMat& A, const SpMat& B)
    : n_(static_cast<int>(A.rows())), m_(static_cast<int>(B.rows())), lu_(std::make_unique<Eigen::UmfPackLU<SpMat>>()) {
  require(A.cols() == n_ && B.cols() == n_, "saddle system dimensions disagree");
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros() + 2 * B.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B.outerSize(); ++k)
    for (SpMat::InnerIterator it(B, k); it; ++it) {
      trip.emplace_back(n_ + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), n_ + it.row(), it.value());
    }
  K_.resize(n_ + m_, n_ + m_);
  K_.setFromTriplets(trip.begin(), trip.end());
  K_.makeCompressed();
  lu_->compute(K_);
  if (lu_->info() != Eigen::Success) throw NumericalError("saddle system: sparse LU factorization failed");
}

SaddleSolver::~SaddleSolver() = default;

SaddleSolution SaddleSolver::solve(const Vector& G, const Vector& F, double tol) const {
  require(F.size() == m_ && G.size() == n_, "saddle right-hand side dimensions disagree");
  Vector rhs(n_ + m_);
  rhs << G, F;
  Vector x = lu_->solve(rhs);
  const double bnorm = std::max(rhs.norm(), 1e-300);
  double res = (rhs - K_ * x).norm() / bnorm;
  for (int it = 0; it < 3 && res > 1e-14; ++it) {
    x += lu_->solve(Vector(rhs - K_ * x));
    res = (rhs - K_ * x).norm() / bnorm;
  }
  if (!std::isfinite(res) || res > tol) {
    throw NumericalError("saddle system: relative residual " + std::to_string(res) + " exceeds tolerance");
  }
  return {x.head(n_), x.tail(m_), res};
}

SaddleSolution solve_saddle(const SpMat& A, const SpMat& B, const Vector& G, const Vector& F, double tol) {
  return SaddleSolver(A, B).solve(G, F, tol);
}

void write_coordinate(std::ostream& os, const SpMat& M) {
  os << M.rows() << ' ' << M.cols() << ' ' << M.nonZeros() << '\n';
  os << std::setprecision(17);
  for (int k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

StressErrors stress_errors(const DiscreteField& sigma_h, const ManufacturedCase& mc, int quad_degree) {
  const FESpace& s = sigma_h.space();
  require(s.kind() == SpaceKind::Stress, "stress errors need a stress field");
  if (quad_degree < 0) quad_degree = 2 * s.k() + 8;
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  const Triangulation& m = s.mesh();
  StressErrors e;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double a = m.area(t);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = s.basis(t).point(rule.points[q]);
      const Matrix D = sigma_h.eval(t, x, 1);
      const Mat2 s0 = mc.sigma(x);
      const auto g0 = mc.grad_sigma(x);
      const Mat2 d0 = stress_from_components(D.row(0).transpose()) - s0;
      const Mat2 dx = stress_from_components(D.row(1).transpose()) - g0[0];
      const Mat2 dy = stress_from_components(D.row(2).transpose()) - g0[1];
      const Vec2 dv(dx(0, 0) + dy(0, 1), dx(1, 0) + dy(1, 1));
      const double w = a * rule.weights[q];
      e.l2 += w * ddot(d0, d0);
      e.h1_semi += w * (ddot(dx, dx) + ddot(dy, dy));
      e.div += w * dv.squaredNorm();
    }
  }
  e.l2 = std::sqrt(e.l2);
  e.h1_semi = std::sqrt(e.h1_semi);
  e.div = std::sqrt(e.div);
  return e;
}

double displacement_l2_error(const DiscreteField& u_h, const std::function<Vec2(int, const Vec2&)>& u_ref,
                             int quad_degree) {
  const FESpace& s = u_h.space();
  if (quad_degree < 0) quad_degree = 2 * s.k() + 8;
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  const Triangulation& m = s.mesh();
  double err = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double a = m.area(t);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = s.basis(t).point(rule.points[q]);
      const Vector uh = u_h.value(t, x);
      err += a * rule.weights[q] * (Vec2(uh(0), uh(1)) - u_ref(t, x)).squaredNorm();
    }
  }
  return std::sqrt(err);
}

}  // namespace sgmix
