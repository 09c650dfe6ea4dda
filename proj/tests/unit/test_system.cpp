#include "sgmix/mesh/generators.hpp"
#include "sgmix/system/assembly.hpp"
#include "sgmix/system/infsup.hpp"
#include "sgmix/verify/convergence.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace sgmix {
namespace {

std::shared_ptr<const Triangulation> share(Triangulation m) {
  return std::make_shared<const Triangulation>(std::move(m));
}

Triangulation equilateral() {
  return Triangulation({Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2)}, {{0, 1, 2}});
}

Vector random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

Vector constant2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double infsup_beta(const SpacePair& sp) {
  return infsup_estimate(Matrix(reduced_h1_gram(sp.sigma)), Matrix(reduced_mass(sp.q)),
                         Matrix(assemble_B(sp.sigma, sp.q)))
      .beta;
}

TEST(Assembly, ComplianceFormIsSpdAtIotaZero) {
  const SpacePair sp = make_pair(share(generate_structured(MeshKind::Crisscross, 2)), PairKind::Hermite, 4);
  const Matrix A = Matrix(assemble_A(sp.sigma, Material{}, 0.0));
  EXPECT_LT((A - A.transpose()).norm(), 1e-12 * A.norm());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Assembly, IotaEntersQuadratically) {
  const SpacePair sp = make_pair(share(split(equilateral(), SplitKind::MorganScott)), PairKind::Lagrange, 4);
  const Material mat{2.0, 0.7};
  const Matrix A0 = Matrix(assemble_A(sp.sigma, mat, 0.0));
  const Matrix A1 = Matrix(assemble_A(sp.sigma, mat, 1.0));
  const Matrix A3 = Matrix(assemble_A(sp.sigma, mat, 0.3));
  EXPECT_LT((A3 - (A0 + 0.09 * (A1 - A0))).norm(), 1e-12 * A1.norm());
}

TEST(Assembly, BitIdenticalOnRepeat) {
  const SpacePair sp = make_pair(share(generate_structured(MeshKind::Diagonal, 2)), PairKind::C2, 5);
  const SpMat A = assemble_A(sp.sigma, Material{}, 0.1);
  const SpMat A2 = assemble_A(sp.sigma, Material{}, 0.1);
  EXPECT_EQ(Matrix(A - A2).cwiseAbs().maxCoeff(), 0.0);
  const SpMat B = assemble_B(sp.sigma, sp.q);
  const SpMat B2 = assemble_B(sp.sigma, sp.q);
  EXPECT_EQ(Matrix(B - B2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assembly, DivergenceOfAiryFieldVanishes) {
  auto m = share(generate_structured(MeshKind::Crisscross, 2));
  const SpacePair sp = make_pair(m, PairKind::Lagrange, 4);
  // psi = x^3 y^2 + x y^4: sigma = (psi_yy, -psi_xy, psi_xx).
  const DiscreteField s = project(sp.sigma, [](const Vec2& p) {
    const double x = p.x(), y = p.y();
    Vector v(3);
    v << 2 * x * x * x + 12 * x * y * y, -(6 * x * x * y + 4 * y * y * y), 6 * x * y * y;
    return v;
  });
  const Vector col = assemble_B(sp.sigma, sp.q) * s.reduced();
  EXPECT_LT(col.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Assembly, DivergenceTheorem) {
  // sigma = (x^2, xy, y^2) has div sigma = (3x, 3y); its integral against e1 is 3/2.
  auto m = share(split(generate_structured(MeshKind::Diagonal, 2), SplitKind::HsiehCloughTocher));
  const SpacePair sp = make_pair(m, PairKind::Hermite, 4);
  const DiscreteField s = project(sp.sigma, [](const Vec2& x) {
    Vector v(3);
    v << x.x() * x.x(), x.x() * x.y(), x.y() * x.y();
    return v;
  });
  const DiscreteField e1 = project(sp.q, [](const Vec2&) { return constant2(1, 0); });
  const SpMat B = assemble_B(sp.sigma, sp.q);
  EXPECT_NEAR(e1.reduced().dot(B * s.reduced()), 1.5, 1e-11);
}

TEST(Assembly, LoadMatchesDoubledQuadrature) {
  auto m = share(generate_structured(MeshKind::Crisscross, 2));
  const FESpace q = FESpace::displacement(m, 5, 1);
  const VectorFunction f = [](const Vec2& x) { return constant2(x.x() * x.x() * x.y(), 1 - x.y() * x.y()); };
  const Vector F = assemble_load(q, f, 7);
  const Vector F2 = assemble_load(q, f, 14);
  EXPECT_LT((F - F2).cwiseAbs().maxCoeff(), 1e-12);
  // (f, g) for g = (1, 1): integral of x^2 y + 1 - y^2 over the square is 1/6 + 2/3.
  const DiscreteField ones = project(q, [](const Vec2&) { return constant2(1, 1); });
  EXPECT_NEAR(ones.reduced().dot(F), 1.0 / 6 + 2.0 / 3, 1e-12);
  const Vector Z = assemble_load(q, [](const Vec2&) { return constant2(0, 0); });
  EXPECT_EQ(Z.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Saddle, ZeroLoadGivesZeroSolution) {
  const SpacePair sp = make_pair(share(generate_structured(MeshKind::Diagonal, 2)), PairKind::C2, 5);
  const SaddleSolution sol = solve_saddle(assemble_A(sp.sigma, Material{}, 0.5), assemble_B(sp.sigma, sp.q),
                                          Vector::Zero(sp.q.dim()));
  EXPECT_EQ(sol.sigma.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(sol.u.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Saddle, SatisfiesBothEquations) {
  const SpacePair sp = make_pair(share(split(generate_structured(MeshKind::Diagonal, 2), SplitKind::MorganScott)),
                                 PairKind::Lagrange, 4);
  const ManufacturedCase mc(CaseKind::InteriorSmooth, Material{});
  const SpMat A = assemble_A(sp.sigma, mc.material(), 1e-2);
  const SpMat B = assemble_B(sp.sigma, sp.q);
  const Vector F = assemble_load(sp.q, [&](const Vec2& x) { return Vector(mc.f(x)); });
  const SaddleSolution sol = solve_saddle(A, B, F);
  EXPECT_LT(sol.relative_residual, 1e-10);
  EXPECT_LT((A * sol.sigma + B.transpose() * sol.u).norm(), 1e-9 * F.norm());
  EXPECT_LT((B * sol.sigma - F).norm(), 1e-9 * F.norm());
}

TEST(Saddle, FactorizationIsReusable) {
  const SpacePair sp = make_pair(share(generate_structured(MeshKind::Diagonal, 2)), PairKind::C2, 5);
  const SpMat A = assemble_A(sp.sigma, Material{1.0, 1.0}, 0.2);
  const SpMat B = assemble_B(sp.sigma, sp.q);
  const SaddleSolver solver(A, B);
  for (unsigned seed : {1u, 2u}) {
    const Vector G = random_vector(sp.sigma.dim(), seed);
    const Vector F = random_vector(sp.q.dim(), seed + 10);
    const SaddleSolution a = solver.solve(G, F);
    const SaddleSolution b = solve_saddle(A, B, G, F, 1e-10);
    EXPECT_LT((a.sigma - b.sigma).norm(), 1e-9 * (1 + b.sigma.norm()));
    EXPECT_LT((a.u - b.u).norm(), 1e-9 * (1 + b.u.norm()));
    EXPECT_LT((A * a.sigma + B.transpose() * a.u - G).norm(), 1e-9 * (G.norm() + F.norm()));
  }
}

TEST(Saddle, DeficientPairThrows) {
  // The crisscross center is a Type I vertex; the hermite B misses one direction.
  const SpacePair sp = make_pair(share(crisscross_patch()), PairKind::Hermite, 5);
  const SpMat A = assemble_A(sp.sigma, Material{1.0, 1.0}, 0.2);
  const SpMat B = assemble_B(sp.sigma, sp.q);
  EXPECT_THROW(solve_saddle(A, B, random_vector(sp.q.dim(), 4)), NumericalError);
}

TEST(Saddle, Inertia) {
  const SpacePair sp = make_pair(share(split(equilateral(), SplitKind::MorganScott)), PairKind::Hermite, 4);
  const Matrix A = Matrix(assemble_A(sp.sigma, Material{1.0, 0.5}, 0.1));
  const Matrix B = Matrix(assemble_B(sp.sigma, sp.q));
  const int n = A.rows(), m = B.rows();
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = A;
  K.topRightCorner(n, m) = B.transpose();
  K.bottomLeftCorner(m, n) = B;
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(K).eigenvalues();
  const double tol = 1e-10 * ev.cwiseAbs().maxCoeff();
  EXPECT_EQ((ev.array() > tol).count(), n);
  EXPECT_EQ((ev.array() < -tol).count(), m);
}

TEST(Saddle, CoordinateExport) {
  SpMat M(2, 3);
  M.insert(0, 2) = 1.5;
  M.insert(1, 0) = -2.0;
  M.makeCompressed();
  std::ostringstream os;
  write_coordinate(os, M);
  std::istringstream is(os.str());
  int rows = 0, cols = 0, nnz = 0;
  is >> rows >> cols >> nnz;
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(cols, 3);
  ASSERT_EQ(nnz, 2);
  double sum = 0.0;
  for (int e = 0; e < nnz; ++e) {
    int i = 0, j = 0;
    double v = 0.0;
    is >> i >> j >> v;
    EXPECT_EQ(v, M.coeff(i, j));
    sum += v;
  }
  EXPECT_EQ(sum, -0.5);
}

TEST(InfSup, DiagonalOracle) {
  Matrix B = Matrix::Zero(3, 4);
  B(0, 0) = 2.0;
  B(1, 1) = 0.5;
  const InfSupResult r = infsup_estimate(Matrix::Identity(4, 4), Matrix::Identity(3, 3), B);
  EXPECT_EQ(r.zero_modes, 1);
  EXPECT_NEAR(r.beta, 0.5, 1e-12);
  EXPECT_NEAR(r.beta_max, 2.0, 1e-12);
  // Weighted norms: G = 4 I scales beta by 1/2, M = 9 I by 1/3.
  const InfSupResult w = infsup_estimate(4 * Matrix::Identity(4, 4), 9 * Matrix::Identity(3, 3), B);
  EXPECT_NEAR(w.beta, 0.5 / 6, 1e-12);
}

TEST(InfSup, ScaleInvariant) {
  const Triangulation base = split(equilateral(), SplitKind::MorganScott);
  std::vector<Vec2> verts;
  for (const Vec2& p : base.vertices()) verts.push_back(3.0 * p + Vec2(-1.0, 2.0));
  const double b1 = infsup_beta(make_pair(share(base), PairKind::Lagrange, 4));
  const double b2 = infsup_beta(make_pair(share(Triangulation(verts, base.triangles())), PairKind::Lagrange, 4));
  EXPECT_NEAR(b2, b1, 1e-8 * b1);
}

TEST(InfSup, MorganScottEquilateralRegression) {
  const auto m = share(split(equilateral(), SplitKind::MorganScott));
  const SpacePair k4 = make_pair(m, PairKind::Lagrange, 4);
  const InfSupResult r4 = infsup_estimate(Matrix(reduced_h1_gram(k4.sigma)), Matrix(reduced_mass(k4.q)),
                                          Matrix(assemble_B(k4.sigma, k4.q)));
  EXPECT_EQ(r4.zero_modes, 0);
  EXPECT_NEAR(r4.beta, 0.01179352089, 1e-9);
  EXPECT_NEAR(infsup_beta(make_pair(m, PairKind::Lagrange, 7)), 0.03619249903, 1e-9);
}

TEST(Errors, ZeroFieldGivesExactNorms) {
  // Independent quadrature of sigma0 for boundary_flux with lambda = 1, mu = 0.3.
  const ManufacturedCase mc(CaseKind::BoundaryFlux, Material{1.0, 0.3});
  const FESpace s = FESpace::stress(share(generate_structured(MeshKind::Diagonal, 2)), 4, 0);
  const DiscreteField zero(s, Vector::Zero(s.dim()));
  const StressErrors e = stress_errors(zero, mc, 30);
  EXPECT_NEAR(e.l2, 0.8613286239086446, 1e-11);
  EXPECT_NEAR(e.h1_semi, 4.04564564886209, 1e-10);
  EXPECT_NEAR(e.div, 3.4049015304408567, 1e-10);
  EXPECT_DOUBLE_EQ(e.iota_norm(0.0), e.div + e.l2);
  EXPECT_DOUBLE_EQ(e.iota_norm(0.5), 0.5 * e.h1_semi + e.div + e.l2);
}

TEST(Errors, DisplacementAgainstConstant) {
  const FESpace q = FESpace::displacement(share(generate_structured(MeshKind::Crisscross, 2)), 4, -1);
  const DiscreteField zero(q, Vector::Zero(q.dim()));
  EXPECT_NEAR(displacement_l2_error(zero, [](int, const Vec2&) { return Vec2(3.0, 4.0); }), 5.0, 1e-12);
  const DiscreteField c = project(q, [](const Vec2&) { return constant2(3, 4); });
  EXPECT_LT(displacement_l2_error(c, [](int, const Vec2&) { return Vec2(3.0, 4.0); }), 1e-12);
}

TEST(Errors, LagrangeMorganScottMatchesPublishedMagnitude) {
  ConvergenceConfig cfg;
  cfg.pair = PairKind::Lagrange;
  cfg.k = 4;
  cfg.split = SplitKind::MorganScott;
  cfg.hsizes = {0.25};
  cfg.check_stability = false;
  const ConvergenceStudy study = convergence_study(cfg);
  ASSERT_EQ(study.rows.size(), 1u);
  const double E = study.rows[0].E_sigma_iota;
  EXPECT_GT(E, 3.21e-1 / 3);
  EXPECT_LT(E, 3.21e-1 * 3);
}

}  // namespace
}  // namespace sgmix
