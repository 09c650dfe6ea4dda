#include "sgmix/spaces/field.hpp"

#include "sgmix/elements/quadrature.hpp"

#include <Eigen/SparseCholesky>

namespace sgmix {

DiscreteField::DiscreteField(const FESpace& space, Vector reduced) : space_(&space), reduced_(std::move(reduced)) {
  require(reduced_.size() == space.dim(), "coefficient vector does not match the space dimension");
  base_ = space.N() * reduced_;
}

Matrix DiscreteField::eval(int t, const Vec2& x, int order) const {
  const FESpace& s = *space_;
  const Matrix D = s.basis(t).eval(x, order);
  const auto& dofs = s.element_dofs(t);
  Matrix out(D.rows(), s.num_components());
  for (int c = 0; c < s.num_components(); ++c) {
    Vector coef(dofs.size());
    for (std::size_t j = 0; j < dofs.size(); ++j) coef(j) = base_(s.base_index(c, dofs[j]));
    out.col(c) = D * coef;
  }
  return out;
}

Vector base_load(const FESpace& space, const VectorFunction& f, int quad_degree) {
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  const Triangulation& m = space.mesh();
  Vector b = Vector::Zero(space.base_dim());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double area = m.area(t);
    const auto& dofs = space.element_dofs(t);
    const ElementBasis& eb = space.basis(t);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 x = eb.point(rule.points[q]);
      const Vector phi = eb.eval(x, 0).row(0).transpose();
      const Vector fx = f(x);
      require(fx.size() == space.num_components(), "function returns the wrong number of components");
      const double w = area * rule.weights[q];
      for (int c = 0; c < space.num_components(); ++c)
        for (std::size_t j = 0; j < dofs.size(); ++j) b(space.base_index(c, dofs[j])) += w * fx(c) * phi(j);
    }
  }
  return b;
}

SpMat scalar_mass(const FESpace& space) {
  const QuadratureRule& rule = quadrature_rule(2 * space.degree());
  const Triangulation& m = space.mesh();
  std::vector<Triplet> trip;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& dofs = space.element_dofs(t);
    const ElementBasis& eb = space.basis(t);
    const int n = static_cast<int>(dofs.size());
    Matrix Me = Matrix::Zero(n, n);
    for (int q = 0; q < rule.size(); ++q) {
      const Vector phi = eb.eval_bary(rule.points[q], 0).row(0).transpose();
      Me.noalias() += rule.weights[q] * phi * phi.transpose();
    }
    Me *= m.area(t);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) trip.emplace_back(dofs[i], dofs[j], Me(i, j));
  }
  SpMat M(space.scalar_dim(), space.scalar_dim());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

DiscreteField project(const FESpace& space, const VectorFunction& f, int quad_degree) {
  if (quad_degree < 0) quad_degree = 2 * space.degree() + 4;
  const SpMat Ms = scalar_mass(space);
  std::vector<Triplet> trip;
  for (int c = 0; c < space.num_components(); ++c)
    for (int k = 0; k < Ms.outerSize(); ++k)
      for (SpMat::InnerIterator it(Ms, k); it; ++it)
        trip.emplace_back(space.base_index(c, it.row()), space.base_index(c, it.col()), it.value());
  SpMat M(space.base_dim(), space.base_dim());
  M.setFromTriplets(trip.begin(), trip.end());
  const SpMat Mr = space.N().transpose() * M * space.N();
  const Vector rhs = space.N().transpose() * base_load(space, f, quad_degree);
  Eigen::SimplicialLDLT<SpMat> ldlt(Mr);
  if (ldlt.info() != Eigen::Success) throw NumericalError("projection: mass matrix factorization failed");
  return DiscreteField(space, ldlt.solve(rhs));
}

Vector stress_components(const Mat2& s) {
  Vector v(3);
  v << s(0, 0), s(0, 1), s(1, 1);
  return v;
}

Mat2 stress_from_components(const Vector& v) {
  Mat2 s;
  s << v(0), v(1), v(1), v(2);
  return s;
}

}  // namespace sgmix
