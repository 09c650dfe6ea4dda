#pragma once

#include "sgmix/common.hpp"

#include <array>
#include <optional>
#include <vector>

namespace sgmix {

struct Edge {
  int v0 = -1;  // v0 < v1
  int v1 = -1;
  int t0 = -1;  // first adjacent triangle
  int t1 = -1;  // second adjacent triangle, -1 on the boundary
  bool boundary() const { return t1 < 0; }
};

/// Quadrilateral parent cells of a structured grid, corners counterclockwise
/// starting at the lower-left corner.
struct GridCells {
  int nx = 0;
  int ny = 0;
  std::vector<std::array<int, 4>> quads;  // row-major, cell (i, j) at j * nx + i
};

/// Conforming triangulation of a connected polygonal domain with every
/// triangle oriented counterclockwise.
class Triangulation {
 public:
  Triangulation() = default;
  /// Validates orientation, conformity and connectivity; throws PreconditionError.
  Triangulation(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                std::optional<GridCells> grid = std::nullopt);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }

  /// Edge opposite to local vertex i of triangle t.
  int triangle_edge(int t, int i) const { return tri_edges_[t][i]; }
  int find_edge(int a, int b) const;  // -1 when absent
  const std::vector<int>& vertex_triangles(int v) const { return vertex_tris_[v]; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }

  double area(int t) const;
  Vec2 centroid(int t) const;
  double diameter(int t) const;
  double max_diameter() const;

  const std::optional<GridCells>& grid() const { return grid_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::vector<int>> vertex_tris_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<bool> boundary_vertex_;
  std::optional<GridCells> grid_;
};

/// Signed area of the triangle (a, b, c).
double signed_area(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace sgmix
