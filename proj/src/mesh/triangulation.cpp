#include "sgmix/mesh/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace sgmix {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Triangulation::Triangulation(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                             std::optional<GridCells> grid)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), grid_(std::move(grid)) {
  const int nv = num_vertices();
  const int nt = num_triangles();
  require(nv >= 3 && nt >= 1, "triangulation needs at least one triangle");

  double extent = 0.0;
  for (const auto& p : vertices_) {
    require(std::isfinite(p.x()) && std::isfinite(p.y()), "non-finite vertex coordinate");
    extent = std::max({extent, std::abs(p.x()), std::abs(p.y())});
  }
  const double area_tol = 1e-14 * std::max(1.0, extent * extent);

  vertex_tris_.assign(nv, {});
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      require(tri[i] >= 0 && tri[i] < nv, "triangle " + std::to_string(t) + " has an invalid vertex index");
    }
    require(tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2],
            "triangle " + std::to_string(t) + " repeats a vertex");
    const double a = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (a <= area_tol) {
      std::ostringstream os;
      os << "triangle " << t << " is " << (std::abs(a) <= area_tol ? "degenerate" : "clockwise");
      throw PreconditionError(os.str());
    }
    for (int i = 0; i < 3; ++i) vertex_tris_[tri[i]].push_back(t);
  }
  for (int v = 0; v < nv; ++v) {
    require(!vertex_tris_[v].empty(), "vertex " + std::to_string(v) + " belongs to no triangle");
  }

  // Edges: each directed edge may appear once; an interior edge appears in both directions.
  std::map<std::pair<int, int>, int> edge_index;
  tri_edges_.assign(nt, {-1, -1, -1});
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const auto key = std::minmax(a, b);
      auto it = edge_index.find({key.first, key.second});
      if (it == edge_index.end()) {
        edge_index.emplace(std::pair<int, int>{key.first, key.second}, static_cast<int>(edges_.size()));
        tri_edges_[t][i] = static_cast<int>(edges_.size());
        edges_.push_back({key.first, key.second, t, -1});
      } else {
        Edge& e = edges_[it->second];
        std::ostringstream os;
        os << "edge (" << e.v0 << ", " << e.v1 << ")";
        require(e.t1 < 0, os.str() + " is shared by more than two triangles");
        // Opposite traversal direction in the two triangles.
        const auto& other = triangles_[e.t0];
        for (int j = 0; j < 3; ++j) {
          if (other[(j + 1) % 3] == a && other[(j + 2) % 3] == b) {
            throw PreconditionError(os.str() + " is traversed in the same direction by two triangles");
          }
        }
        e.t1 = t;
        tri_edges_[t][i] = it->second;
      }
    }
  }

  boundary_vertex_.assign(nv, false);
  vertex_edges_.assign(nv, {});
  for (int e = 0; e < num_edges(); ++e) {
    vertex_edges_[edges_[e].v0].push_back(e);
    vertex_edges_[edges_[e].v1].push_back(e);
    if (edges_[e].boundary()) {
      boundary_vertex_[edges_[e].v0] = true;
      boundary_vertex_[edges_[e].v1] = true;
    }
  }

  // Hanging nodes: a vertex in the relative interior of a boundary edge.
  for (const Edge& e : edges_) {
    if (!e.boundary()) continue;
    const Vec2& a = vertices_[e.v0];
    const Vec2& b = vertices_[e.v1];
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    for (int v = 0; v < nv; ++v) {
      if (v == e.v0 || v == e.v1) continue;
      const Vec2 w = vertices_[v] - a;
      const double s = w.dot(d) / len2;
      if (s <= 1e-12 || s >= 1.0 - 1e-12) continue;
      const double cross = d.x() * w.y() - d.y() * w.x();
      if (std::abs(cross) <= 1e-12 * len2) {
        std::ostringstream os;
        os << "hanging node: vertex " << v << " lies on edge (" << e.v0 << ", " << e.v1 << ")";
        throw PreconditionError(os.str());
      }
    }
  }

  // Each vertex star must be a single fan: count boundary edges per vertex.
  for (int v = 0; v < nv; ++v) {
    int nb = 0;
    for (int e : vertex_edges_[v]) nb += edges_[e].boundary() ? 1 : 0;
    require(nb == 0 || nb == 2, "vertex " + std::to_string(v) + " is not manifold");
  }

  // Connectivity through edges.
  std::vector<int> seen(nt, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    for (int i = 0; i < 3; ++i) {
      const Edge& e = edges_[tri_edges_[t][i]];
      const int n = e.t0 == t ? e.t1 : e.t0;
      if (n >= 0 && !seen[n]) {
        seen[n] = 1;
        ++count;
        stack.push_back(n);
      }
    }
  }
  require(count == nt, "triangulation is not connected");
}

int Triangulation::find_edge(int a, int b) const {
  if (a < 0 || a >= num_vertices()) return -1;
  for (int e : vertex_edges_[a]) {
    if ((edges_[e].v0 == a && edges_[e].v1 == b) || (edges_[e].v1 == a && edges_[e].v0 == b)) return e;
  }
  return -1;
}

double Triangulation::area(int t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

Vec2 Triangulation::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

double Triangulation::diameter(int t) const {
  const auto& tri = triangles_[t];
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, (vertices_[tri[i]] - vertices_[tri[(i + 1) % 3]]).norm());
  return d;
}

double Triangulation::max_diameter() const {
  double d = 0.0;
  for (int t = 0; t < num_triangles(); ++t) d = std::max(d, diameter(t));
  return d;
}

}  // namespace sgmix
