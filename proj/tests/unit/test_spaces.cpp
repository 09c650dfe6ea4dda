#include "sgmix/mesh/generators.hpp"
#include "sgmix/spaces/field.hpp"
#include "sgmix/verify/audits.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

namespace sgmix {
namespace {

std::shared_ptr<const Triangulation> share(Triangulation m) {
  return std::make_shared<const Triangulation>(std::move(m));
}

Vector random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// Scalar C0 P_k dimension: vertices, edge interiors, cell interiors.
int c0_dim(const Triangulation& m, int k) {
  return m.num_vertices() + (k - 1) * m.num_edges() + (k - 1) * (k - 2) / 2 * m.num_triangles();
}

// Largest disagreement of derivatives up to `order` between triangles sharing a vertex.
double vertex_jet_jump(const DiscreteField& f, int order) {
  const Triangulation& m = f.space().mesh();
  double worst = 0.0;
  for (int v = 0; v < m.num_vertices(); ++v) {
    const auto& tris = m.vertex_triangles(v);
    const Matrix ref = f.eval(tris[0], m.vertex(v), order);
    for (int t : tris) worst = std::max(worst, (f.eval(t, m.vertex(v), order) - ref).cwiseAbs().maxCoeff());
  }
  return worst;
}

double edge_jump(const DiscreteField& f) {
  const Triangulation& m = f.space().mesh();
  double worst = 0.0;
  for (const Edge& e : m.edges()) {
    if (e.boundary()) continue;
    for (double s : {0.13, 0.5, 0.71}) {
      const Vec2 x = (1 - s) * m.vertex(e.v0) + s * m.vertex(e.v1);
      worst = std::max(worst, (f.value(e.t0, x) - f.value(e.t1, x)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

TEST(StressSpace, SingleTriangleIsUnconstrained) {
  const FESpace s = FESpace::stress(share(single_triangle()), 4, 0);
  EXPECT_EQ(s.num_components(), 3);
  EXPECT_EQ(s.base_dim(), 45);
  EXPECT_EQ(s.dim(), 45);
}

TEST(StressSpace, ContinuousDimension) {
  for (int k : {2, 4, 6}) {
    auto m = share(generate_structured(MeshKind::Diagonal, 3));
    const FESpace s = FESpace::stress(m, k, 0);
    EXPECT_EQ(s.dim(), 3 * c0_dim(*m, k)) << "k=" << k;
  }
}

TEST(StressSpace, CrisscrossPatchDimensions) {
  auto m = share(crisscross_patch());
  EXPECT_EQ(FESpace::stress(m, 7, 0).dim(), 3 * c0_dim(*m, 7));
  EXPECT_EQ(FESpace::stress(m, 7, 0).dim(), 339);
  EXPECT_EQ(FESpace::stress(m, 7, 1).dim(), 321);
  EXPECT_EQ(FESpace::stress(m, 7, 2).dim(),
            sigma2_dim_formula(7, m->num_triangles(), m->num_edges(), m->num_vertices()));
  EXPECT_EQ(FESpace::stress(m, 7, 2).dim(), 282);
}

TEST(StressSpace, NullspaceMapIsOrthonormal) {
  auto m = share(generate_structured(MeshKind::Crisscross, 2));
  for (int r : {0, 1, 2}) {
    const FESpace s = FESpace::stress(m, 5, r);
    const Matrix N = Matrix(s.N());
    EXPECT_LT((N.transpose() * N - Matrix::Identity(s.dim(), s.dim())).norm(), 1e-10) << "r=" << r;
  }
}

TEST(StressSpace, FieldsAreContinuousWithVertexJets) {
  auto m = share(split(generate_structured(MeshKind::Diagonal, 2), SplitKind::HsiehCloughTocher));
  for (int r : {0, 1, 2}) {
    const FESpace s = FESpace::stress(m, 5, r);
    const DiscreteField f(s, random_vector(s.dim(), 7 + r));
    const double scale = f.base().cwiseAbs().maxCoeff();
    EXPECT_LT(edge_jump(f), 1e-10 * scale) << "r=" << r;
    EXPECT_LT(vertex_jet_jump(f, r), 1e-8 * scale) << "r=" << r;
  }
}

TEST(StressSpace, InclusionChain) {
  auto m = share(generate_structured(MeshKind::Crisscross, 2));
  const Matrix N0 = Matrix(FESpace::stress(m, 5, 0).N());
  const Matrix N1 = Matrix(FESpace::stress(m, 5, 1).N());
  const Matrix N2 = Matrix(FESpace::stress(m, 5, 2).N());
  EXPECT_LT((N0 * (N0.transpose() * N1) - N1).norm(), 1e-9);
  EXPECT_LT((N1 * (N1.transpose() * N2) - N2).norm(), 1e-9);
}

TEST(StressSpace, RejectsBadParameters) {
  auto m = share(single_triangle());
  EXPECT_THROW(FESpace::stress(m, 0, 0), PreconditionError);
  EXPECT_THROW(FESpace::stress(m, 2, 2), PreconditionError);
  EXPECT_THROW(FESpace::stress(m, 4, 3), PreconditionError);
  EXPECT_THROW(FESpace::stress(nullptr, 4, 0), PreconditionError);
  EXPECT_THROW(FESpace::displacement(m, 1, 0), PreconditionError);
  EXPECT_THROW(FESpace::displacement(m, 4, 2), PreconditionError);
}

TEST(DisplacementSpace, Dimensions) {
  auto tri = share(single_triangle());
  EXPECT_EQ(FESpace::displacement(tri, 7, 1).dim(), 56);
  auto m = share(generate_structured(MeshKind::Diagonal, 3));
  EXPECT_EQ(FESpace::displacement(m, 4, -1).dim(), 20 * m->num_triangles());
  for (int k : {4, 7}) {
    EXPECT_EQ(FESpace::displacement(m, k, 1).dim(), q1_dim_formula(k, m->num_triangles(), m->num_vertices()))
        << "k=" << k;
  }
  // s = 0: one shared value per vertex and component.
  EXPECT_EQ(FESpace::displacement(m, 4, 0).dim(), 2 * (10 * m->num_triangles() - 3 * m->num_triangles() + m->num_vertices()));
}

TEST(DisplacementSpace, VertexJetsAgree) {
  auto m = share(generate_structured(MeshKind::Crisscross, 2));
  for (int s : {0, 1}) {
    const FESpace q = FESpace::displacement(m, 5, s);
    EXPECT_EQ(q.num_components(), 2);
    EXPECT_EQ(q.degree(), 4);
    const DiscreteField f(q, random_vector(q.dim(), 11 + s));
    EXPECT_LT(vertex_jet_jump(f, s), 1e-8 * f.base().cwiseAbs().maxCoeff()) << "s=" << s;
  }
  const FESpace q = FESpace::displacement(m, 5, -1);
  const DiscreteField f(q, random_vector(q.dim(), 3));
  EXPECT_GT(vertex_jet_jump(f, 0), 1e-3);
}

TEST(Pairs, SmoothnessAndNames) {
  for (PairKind p : {PairKind::Lagrange, PairKind::Hermite, PairKind::C2}) {
    EXPECT_EQ(parse_pair_kind(to_string(p)), p);
    const SpacePair sp = make_pair(share(single_triangle()), p, 5);
    EXPECT_EQ(sp.sigma.smoothness(), stress_smoothness(p));
    EXPECT_EQ(sp.q.smoothness(), stress_smoothness(p) - 1);
    EXPECT_EQ(sp.q.degree(), 4);
  }
  EXPECT_THROW(parse_pair_kind("taylor-hood"), PreconditionError);
}

TEST(Projection, ReproducesPolynomials) {
  auto m = share(split(generate_structured(MeshKind::Diagonal, 2), SplitKind::MorganScott));
  const FESpace s = FESpace::stress(m, 4, 1);
  const VectorFunction poly = [](const Vec2& x) {
    Vector v(3);
    v << x.x() + x.y(), x.x() * x.y(), x.y() * x.y() * x.x() - 2.0;
    return v;
  };
  const DiscreteField f = project(s, poly);
  for (int t = 0; t < m->num_triangles(); ++t) {
    const Vec2 c = m->centroid(t);
    EXPECT_LT((f.value(t, c) - poly(c)).norm(), 1e-10);
  }
}

TEST(Loads, ConstantIntegratesToArea) {
  auto m = share(generate_structured(MeshKind::Crisscross, 2));
  const FESpace q = FESpace::displacement(m, 4, 1);
  EXPECT_EQ(scalar_mass(q).rows(), q.scalar_dim());
  const Vector load = base_load(q, [](const Vec2&) { return Vector::Ones(2); }, 6);
  // Bernstein functions sum to one, so the load sums to the area per component.
  EXPECT_NEAR(load.sum(), 2.0, 1e-12);
}

TEST(Projection, Idempotent) {
  auto m = share(generate_structured(MeshKind::Crisscross, 2));
  const FESpace q = FESpace::displacement(m, 4, 1);
  const VectorFunction f = [](const Vec2& x) {
    Vector v(2);
    v << std::sin(3 * x.x()) * x.y(), std::exp(x.x() - x.y());
    return v;
  };
  const DiscreteField p1 = project(q, f, 12);
  const DiscreteField p2 = project(q, [&](const Vec2& x) {
    for (int t = 0; t < m->num_triangles(); ++t) {
      const auto& tri = m->triangle(t);
      const Vec2 a = m->vertex(tri[0]), b = m->vertex(tri[1]), c = m->vertex(tri[2]);
      if (signed_area(a, b, x) >= -1e-14 && signed_area(b, c, x) >= -1e-14 && signed_area(c, a, x) >= -1e-14)
        return p1.value(t, x);
    }
    return Vector(Vector::Zero(2));
  }, 12);
  EXPECT_LT((p2.reduced() - p1.reduced()).norm(), 1e-9 * p1.reduced().norm());
}

TEST(Projection, OfFieldIsItself) {
  auto m = share(single_triangle());
  const FESpace s = FESpace::stress(m, 5, 0);
  const DiscreteField f(s, random_vector(s.dim(), 9));
  const DiscreteField g = project(s, [&](const Vec2& x) { return f.value(0, x); });
  EXPECT_LT((g.reduced() - f.reduced()).norm(), 1e-10 * f.reduced().norm());
}

TEST(DiscreteField, DerivativesMatchFiniteDifferences) {
  auto m = share(hct_patch());
  const FESpace s = FESpace::stress(m, 6, 1);
  const DiscreteField f(s, random_vector(s.dim(), 21));
  const double h = 1e-6;
  for (int t = 0; t < m->num_triangles(); ++t) {
    const Vec2 c = m->centroid(t);
    const Matrix d = f.eval(t, c, 1);
    const Vector dx = (f.value(t, c + Vec2(h, 0)) - f.value(t, c - Vec2(h, 0))) / (2 * h);
    const Vector dy = (f.value(t, c + Vec2(0, h)) - f.value(t, c - Vec2(0, h))) / (2 * h);
    EXPECT_LT((d.row(deriv_index(1, 0)).transpose() - dx).norm(), 1e-6 * (1 + dx.norm()));
    EXPECT_LT((d.row(deriv_index(0, 1)).transpose() - dy).norm(), 1e-6 * (1 + dy.norm()));
  }
}

TEST(StressComponents, RoundTrip) {
  Mat2 s;
  s << 1.5, -0.25, -0.25, 3.0;
  const Vector v = stress_components(s);
  EXPECT_DOUBLE_EQ(v(0), 1.5);
  EXPECT_DOUBLE_EQ(v(1), -0.25);
  EXPECT_DOUBLE_EQ(v(2), 3.0);
  EXPECT_EQ(stress_from_components(v), s);
}

}  // namespace
}  // namespace sgmix
