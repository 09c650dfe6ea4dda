#include "sgmix/mesh/generators.hpp"
#include "sgmix/mesh/io.hpp"
#include "sgmix/mesh/locator.hpp"
#include "sgmix/mesh/star.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

namespace sgmix {
namespace {

constexpr double kPi = std::numbers::pi;

int count_interior(const Triangulation& m) {
  int n = 0;
  for (int v = 0; v < m.num_vertices(); ++v) n += m.is_boundary_vertex(v) ? 0 : 1;
  return n;
}

int count_singular(const std::vector<VertexClass>& classes) {
  int n = 0;
  for (const auto& c : classes) n += (c.kind == VertexKind::TypeI || is_type_two(c.kind)) ? 1 : 0;
  return n;
}

int interior_vertex(const Triangulation& m) {
  for (int v = 0; v < m.num_vertices(); ++v)
    if (!m.is_boundary_vertex(v)) return v;
  return -1;
}

Triangulation transformed(const Triangulation& m, double angle, double scale, const Vec2& shift) {
  const Eigen::Rotation2Dd rot(angle);
  std::vector<Vec2> verts;
  for (const auto& p : m.vertices()) verts.push_back(scale * (rot * p) + shift);
  return Triangulation(verts, m.triangles());
}

Triangulation equilateral() {
  return Triangulation({Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2)}, {{0, 1, 2}});
}

TEST(Generators, DiagonalTwo) {
  const Triangulation m = generate_structured(MeshKind::Diagonal, 2);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(count_interior(m), 1);
}

TEST(Generators, CrisscrossOne) {
  const Triangulation m = generate_structured(MeshKind::Crisscross, 1);
  EXPECT_EQ(m.num_triangles(), 4);
  EXPECT_EQ(m.num_vertices(), 5);
  const int c = interior_vertex(m);
  ASSERT_GE(c, 0);
  EXPECT_NEAR(m.vertex(c).x(), 0.5, 1e-15);
  EXPECT_NEAR(m.vertex(c).y(), 0.5, 1e-15);
}

TEST(Generators, DiagonalFourAllTypeTwo) {
  const auto classes = classify_vertices(generate_structured(MeshKind::Diagonal, 4));
  int n = 0;
  for (const auto& c : classes) {
    if (c.kind == VertexKind::Boundary) continue;
    EXPECT_EQ(c.kind, VertexKind::TypeII_Nondegenerate);
    ++n;
  }
  EXPECT_EQ(n, 9);
}

TEST(Generators, RejectsBadInput) {
  EXPECT_THROW(generate_structured(MeshKind::Diagonal, 0), PreconditionError);
  EXPECT_THROW(parse_mesh_kind("hexagonal"), PreconditionError);
  EXPECT_THROW(parse_split_kind("loop"), PreconditionError);
}

TEST(Split, MorganScottSingleTriangle) {
  const Triangulation m = split(single_triangle(), SplitKind::MorganScott, 0.25);
  EXPECT_EQ(m.num_triangles(), 7);
  EXPECT_EQ(m.num_vertices(), 6);
  EXPECT_EQ(count_interior(m), 3);
}

TEST(Split, HctBarycenterIsTypeTwoThree) {
  const Triangulation m = split(single_triangle(), SplitKind::HsiehCloughTocher);
  EXPECT_EQ(m.num_triangles(), 3);
  const auto classes = classify_vertices(m);
  const int c = interior_vertex(m);
  EXPECT_EQ(classes[c].kind, VertexKind::TypeII_3);
}

TEST(Split, MorganScottRemovesSingularVertices) {
  const Triangulation base = generate_structured(MeshKind::Diagonal, 4);
  EXPECT_EQ(count_singular(classify_vertices(base)), 9);
  for (double r : {0.2, 0.25, 0.3}) {
    EXPECT_EQ(count_singular(classify_vertices(split(base, SplitKind::MorganScott, r))), 0) << "r = " << r;
  }
  EXPECT_EQ(count_singular(classify_vertices(split(generate_structured(MeshKind::Crisscross, 3),
                                                   SplitKind::MorganScott, 0.27))),
            0);
}

TEST(Split, ChildAreasSumToParent) {
  const Triangulation base = generate_structured(MeshKind::Crisscross, 2);
  for (SplitKind kind : {SplitKind::MorganScott, SplitKind::HsiehCloughTocher}) {
    const SplitResult r = split_traced(base, kind, 0.25);
    std::vector<double> sum(base.num_triangles(), 0.0);
    for (int t = 0; t < r.mesh.num_triangles(); ++t) sum[r.parent[t]] += r.mesh.area(t);
    for (int t = 0; t < base.num_triangles(); ++t) EXPECT_NEAR(sum[t], base.area(t), 1e-12);
  }
  const Triangulation grid = generate_structured(MeshKind::Diagonal, 3);
  const SplitResult fb = split_traced(grid, SplitKind::Fishbone);
  std::vector<double> cell(9, 0.0);
  for (int t = 0; t < fb.mesh.num_triangles(); ++t) cell[fb.parent[t]] += fb.mesh.area(t);
  for (double a : cell) EXPECT_NEAR(a, 1.0 / 9, 1e-12);
}

TEST(Split, FishboneNeedsGrid) { EXPECT_THROW(split(single_triangle(), SplitKind::Fishbone), PreconditionError); }

TEST(Star, DiagonalInteriorVertex) {
  const Triangulation m = generate_structured(MeshKind::Diagonal, 2);
  const VertexStar s = build_star(m, interior_vertex(m));
  ASSERT_EQ(s.m(), 6);
  const double expected[6] = {kPi / 4, kPi / 4, kPi / 2, kPi / 4, kPi / 4, kPi / 2};
  for (int e = 0; e < 6; ++e) EXPECT_NEAR(s.theta[e], expected[e], 1e-14);
}

TEST(Star, CrisscrossCenterAndCorner) {
  const Triangulation m = crisscross_patch();
  const VertexStar c = build_star(m, 4);
  EXPECT_TRUE(c.interior);
  ASSERT_EQ(c.m(), 4);
  for (double th : c.theta) EXPECT_NEAR(th, kPi / 2, 1e-14);
  const VertexStar corner = build_star(m, 0);
  EXPECT_FALSE(corner.interior);
  double sum = 0;
  for (double th : corner.theta) sum += th;
  EXPECT_NEAR(sum, kPi / 2, 1e-14);
}

TEST(Star, GeometricInvariants) {
  const Triangulation m = split(generate_structured(MeshKind::Crisscross, 2), SplitKind::MorganScott, 0.23);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const VertexStar s = build_star(m, v);
    for (int i = 0; i < s.num_rays(); ++i) {
      EXPECT_NEAR(s.t[i].norm(), 1.0, 1e-14);
      EXPECT_NEAR(s.n[i].dot(s.t[i]), 0.0, 1e-14);
    }
    if (!s.interior) continue;
    double sum = 0;
    for (double th : s.theta) sum += th;
    EXPECT_NEAR(sum, 2 * kPi, 1e-12);
    for (int e = 0; e < s.m(); ++e) {
      const Vec2 rotated = Eigen::Rotation2Dd(s.theta[e]) * s.t[s.ray_minus(e)];
      EXPECT_NEAR((rotated - s.t[s.ray_plus(e)]).norm(), 0.0, 1e-12);
    }
  }
}

TEST(Theta, ClosedFormValues) {
  const ThetaMetrics criss = theta_metrics(build_star(crisscross_patch(), 4));
  EXPECT_NEAR(criss.theta_I, 0.0, 1e-15);
  EXPECT_NEAR(criss.theta_II, 0.0, 1e-15);
  const Triangulation hex = hexagon_patch(0.0);
  const ThetaMetrics eq = theta_metrics(build_star(hex, 0));
  EXPECT_NEAR(eq.theta_I, std::sqrt(3.0) / 2, 1e-12);
  EXPECT_NEAR(eq.theta_II, 0.0, 1e-12);
  const Triangulation diag = generate_structured(MeshKind::Diagonal, 2);
  EXPECT_NEAR(theta_metrics(build_star(diag, interior_vertex(diag))).theta_I, 1.0, 1e-14);
}

TEST(Theta, MorganScottEquilateralRegression) {
  const Triangulation m = split(equilateral(), SplitKind::MorganScott, 0.25);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.is_boundary_vertex(v)) continue;
    const ThetaMetrics t = theta_metrics(build_star(m, v));
    EXPECT_NEAR(t.theta_II, 0.59603956067927, 1e-12);
  }
}

TEST(Theta, ThetaOneZeroIffTwoLines) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec2> verts{Vec2(0, 0)};
    const bool two_lines = trial % 2 == 0;
    const double a = jitter(rng), b = kPi / 2 + jitter(rng) * (two_lines ? 1.0 : 0.5);
    std::vector<double> angles{a, b, a + kPi, b + kPi};
    if (!two_lines) angles[2] += 0.3 + jitter(rng) * 0.1;
    for (double t : angles) verts.emplace_back(std::cos(t), std::sin(t));
    const Triangulation m(verts, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}});
    const VertexStar s = build_star(m, 0);
    bool pairwise_two_lines = true;
    for (int i = 0; i < 4; ++i) {
      int parallel = 0;
      for (int j = 0; j < 4; ++j) {
        const double cross = s.t[i].x() * s.t[j].y() - s.t[i].y() * s.t[j].x();
        if (i != j && std::abs(cross) < 1e-12) ++parallel;
      }
      if (parallel == 0) pairwise_two_lines = false;
    }
    EXPECT_EQ(pairwise_two_lines, two_lines);
    EXPECT_EQ(theta_metrics(s).theta_I < 1e-12, pairwise_two_lines);
  }
}

TEST(Theta, InvariantUnderSimilarity) {
  for (const Triangulation& m : {hexagon_patch(0.13), split(equilateral(), SplitKind::MorganScott, 0.21),
                                 generate_structured(MeshKind::Diagonal, 3)}) {
    const Triangulation moved = transformed(m, 0.7, 3.3, Vec2(-2.0, 5.0));
    for (int v = 0; v < m.num_vertices(); ++v) {
      if (m.is_boundary_vertex(v)) continue;
      const ThetaMetrics a = theta_metrics(build_star(m, v));
      const ThetaMetrics b = theta_metrics(build_star(moved, v));
      EXPECT_NEAR(a.theta_I, b.theta_I, 1e-12);
      EXPECT_NEAR(a.theta_II, b.theta_II, 1e-12);
    }
  }
}

TEST(Classify, PatchKinds) {
  EXPECT_EQ(classify_vertices(crisscross_patch())[4].kind, VertexKind::TypeI);
  const Triangulation diag = generate_structured(MeshKind::Diagonal, 2);
  EXPECT_EQ(classify_vertices(diag)[interior_vertex(diag)].kind, VertexKind::TypeII_Nondegenerate);
  EXPECT_EQ(classify_vertices(hexagon_patch(0.0))[0].kind, VertexKind::TypeII_Nondegenerate);
  EXPECT_EQ(classify_vertices(hexagon_patch(0.1))[0].kind, VertexKind::Regular);
  const auto bc = classify_vertices(crisscross_patch());
  EXPECT_EQ(bc[0].kind, VertexKind::Boundary);
  EXPECT_TRUE(std::isnan(bc[0].theta_I));
}

TEST(Classify, HexagonThetaTwoLinearInDelta) {
  const double t1 = theta_metrics(build_star(hexagon_patch(0.01), 0)).theta_II;
  const double t2 = theta_metrics(build_star(hexagon_patch(0.02), 0)).theta_II;
  EXPECT_GT(t1, 0.0);
  EXPECT_NEAR(t2 / t1, 2.0, 0.02);
}

class MeshIo : public ::testing::Test {
 protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "sgmix_mesh_io";
  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }
};

TEST_F(MeshIo, RoundTrip) {
  const Triangulation m = generate_structured(MeshKind::Crisscross, 1);
  const std::string path = (dir / "patch.json").string();
  save_mesh(m, path);
  const LoadedMesh back = load_mesh(path);
  EXPECT_TRUE(back.warnings.empty());
  ASSERT_EQ(back.mesh.num_vertices(), m.num_vertices());
  ASSERT_EQ(back.mesh.num_triangles(), m.num_triangles());
  for (int v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(back.mesh.vertex(v), m.vertex(v));
  for (int t = 0; t < m.num_triangles(); ++t) EXPECT_EQ(back.mesh.triangle(t), m.triangle(t));
}

TEST_F(MeshIo, GridSurvivesRoundTrip) {
  const Triangulation m = generate_structured(MeshKind::Diagonal, 2);
  const LoadedMesh back = mesh_from_json(mesh_to_json(m));
  ASSERT_TRUE(back.mesh.grid().has_value());
  EXPECT_EQ(split(back.mesh, SplitKind::Fishbone).num_triangles(), 8);
}

TEST_F(MeshIo, ReorientsClockwiseTriangles) {
  const nlohmann::json j = {{"vertices", {{0, 0}, {1, 0}, {0, 1}, {1, 1}}}, {"triangles", {{0, 2, 1}, {1, 3, 2}}}};
  const LoadedMesh lm = mesh_from_json(j);
  ASSERT_EQ(lm.warnings.size(), 1u);
  EXPECT_NE(lm.warnings[0].find("triangle 0"), std::string::npos);
  for (int t = 0; t < 2; ++t) EXPECT_GT(lm.mesh.area(t), 0.0);
}

TEST_F(MeshIo, HangingNodeNamesEdge) {
  // Vertex 3 sits on the edge (0, 1) of the upper triangle.
  const nlohmann::json j = {{"vertices", {{0, 0}, {2, 0}, {1, 1}, {1, 0}, {1, -1}}},
                            {"triangles", {{0, 1, 2}, {0, 4, 3}, {3, 4, 1}}}};
  try {
    mesh_from_json(j);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("edge (0, 1)"), std::string::npos) << e.what();
  }
}

TEST_F(MeshIo, RejectsMalformedFiles) {
  const std::string path = (dir / "bad.json").string();
  std::ofstream(path) << "{\"vertices\": [[0, 0]]";
  EXPECT_THROW(load_mesh(path), PreconditionError);
  EXPECT_THROW(load_mesh((dir / "missing.json").string()), PreconditionError);
  EXPECT_THROW(mesh_from_json({{"vertices", {{0, 0, 0}}}, {"triangles", nlohmann::json::array()}}), PreconditionError);
}

TEST(Locator, FindsContainingTriangle) {
  const Triangulation m = split(generate_structured(MeshKind::Diagonal, 4), SplitKind::MorganScott, 0.25);
  const PointLocator loc(m);
  for (int t = 0; t < m.num_triangles(); ++t) EXPECT_EQ(loc.locate(m.centroid(t)), t);
  EXPECT_EQ(loc.locate(Vec2(1.5, 0.5)), -1);
}

}  // namespace
}  // namespace sgmix
