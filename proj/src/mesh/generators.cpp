#include "sgmix/mesh/generators.hpp"

#include <cmath>
#include <numbers>

namespace sgmix {

MeshKind parse_mesh_kind(const std::string& s) {
  if (s == "diagonal") return MeshKind::Diagonal;
  if (s == "crisscross") return MeshKind::Crisscross;
  throw PreconditionError("unknown mesh kind '" + s + "'");
}

SplitKind parse_split_kind(const std::string& s) {
  if (s == "ms" || s == "morgan-scott") return SplitKind::MorganScott;
  if (s == "hct") return SplitKind::HsiehCloughTocher;
  if (s == "fishbone") return SplitKind::Fishbone;
  throw PreconditionError("unknown split kind '" + s + "'");
}

std::string to_string(MeshKind k) { return k == MeshKind::Diagonal ? "diagonal" : "crisscross"; }

std::string to_string(SplitKind k) {
  switch (k) {
    case SplitKind::MorganScott: return "ms";
    case SplitKind::HsiehCloughTocher: return "hct";
    case SplitKind::Fishbone: return "fishbone";
  }
  return "";
}

Triangulation generate_structured(MeshKind kind, int n) {
  require(n >= 1, "grid resolution n must be positive");
  const double h = 1.0 / n;
  std::vector<Vec2> verts;
  verts.reserve((n + 1) * (n + 1) + (kind == MeshKind::Crisscross ? n * n : 0));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(i * h, j * h);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };

  GridCells grid{n, n, {}};
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int p00 = id(i, j), p10 = id(i + 1, j), p11 = id(i + 1, j + 1), p01 = id(i, j + 1);
      grid.quads.push_back({p00, p10, p11, p01});
      if (kind == MeshKind::Diagonal) {
        tris.push_back({p00, p10, p11});
        tris.push_back({p00, p11, p01});
      } else {
        const int c = static_cast<int>(verts.size());
        verts.emplace_back((i + 0.5) * h, (j + 0.5) * h);
        tris.push_back({p00, p10, c});
        tris.push_back({p10, p11, c});
        tris.push_back({p11, p01, c});
        tris.push_back({p01, p00, c});
      }
    }
  }
  return Triangulation(std::move(verts), std::move(tris), std::move(grid));
}

SplitResult split_traced(const Triangulation& mesh, SplitKind kind, double r) {
  std::vector<Vec2> verts = mesh.vertices();
  std::vector<std::array<int, 3>> tris;
  std::vector<int> parent;

  if (kind == SplitKind::Fishbone) {
    require(mesh.grid().has_value(), "fishbone split needs a mesh with grid cells");
    const GridCells& g = *mesh.grid();
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int cell = j * g.nx + i;
        const auto& q = g.quads[cell];
        if (i % 2 == 0) {
          tris.push_back({q[0], q[1], q[2]});
          tris.push_back({q[0], q[2], q[3]});
        } else {
          tris.push_back({q[0], q[1], q[3]});
          tris.push_back({q[1], q[2], q[3]});
        }
        parent.push_back(cell);
        parent.push_back(cell);
      }
    }
    // Drop vertices not used by the grid corners (e.g. crisscross centers).
    std::vector<int> remap(verts.size(), -1);
    std::vector<Vec2> used;
    for (auto& t : tris)
      for (int& v : t) {
        if (remap[v] < 0) {
          remap[v] = -2;
        }
      }
    for (std::size_t v = 0; v < verts.size(); ++v)
      if (remap[v] == -2) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(verts[v]);
      }
    for (auto& t : tris)
      for (int& v : t) v = remap[v];
    GridCells ng = g;
    for (auto& q : ng.quads)
      for (int& v : q) v = remap[v];
    return {Triangulation(std::move(used), std::move(tris), std::move(ng)), std::move(parent)};
  }

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const int A = tri[0], B = tri[1], C = tri[2];
    const Vec2 &pa = mesh.vertex(A), &pb = mesh.vertex(B), &pc = mesh.vertex(C);
    if (kind == SplitKind::HsiehCloughTocher) {
      const int g = static_cast<int>(verts.size());
      verts.push_back((pa + pb + pc) / 3.0);
      tris.push_back({A, B, g});
      tris.push_back({B, C, g});
      tris.push_back({C, A, g});
      parent.insert(parent.end(), 3, t);
    } else {
      require(r > 0.0 && r < 1.0, "Morgan-Scott parameter must lie in (0, 1)");
      const int a = static_cast<int>(verts.size());
      const int b = a + 1, c = a + 2;
      verts.push_back((1.0 - r) * 0.5 * (pb + pc) + r * pa);
      verts.push_back((1.0 - r) * 0.5 * (pc + pa) + r * pb);
      verts.push_back((1.0 - r) * 0.5 * (pa + pb) + r * pc);
      tris.push_back({a, b, c});
      tris.push_back({A, c, b});
      tris.push_back({B, a, c});
      tris.push_back({C, b, a});
      tris.push_back({A, B, c});
      tris.push_back({B, C, a});
      tris.push_back({C, A, b});
      parent.insert(parent.end(), 7, t);
    }
  }
  return {Triangulation(std::move(verts), std::move(tris)), std::move(parent)};
}

Triangulation split(const Triangulation& mesh, SplitKind kind, double r) {
  return split_traced(mesh, kind, r).mesh;
}

Triangulation single_triangle() {
  return Triangulation({Vec2(0.0, 1.0), Vec2(-0.6, 0.0), Vec2(0.6, 0.0)}, {{0, 1, 2}});
}

Triangulation crisscross_patch() {
  return Triangulation({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1), Vec2(0.5, 0.5)},
                       {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
}

Triangulation hexagon_patch(double delta) {
  std::vector<Vec2> verts;
  const double h = 1.0;
  verts.push_back(delta * h * Vec2(0.6, 0.8));
  for (int i = 0; i < 6; ++i) {
    const double a = i * std::numbers::pi / 3.0;
    verts.emplace_back(h * std::cos(a), h * std::sin(a));
  }
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < 6; ++i) tris.push_back({0, 1 + i, 1 + (i + 1) % 6});
  return Triangulation(std::move(verts), std::move(tris));
}

Triangulation hct_patch() { return split(single_triangle(), SplitKind::HsiehCloughTocher); }

Triangulation ms_patch(double r) { return split(single_triangle(), SplitKind::MorganScott, r); }

}  // namespace sgmix
