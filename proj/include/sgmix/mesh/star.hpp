#pragma once

#include "sgmix/mesh/triangulation.hpp"

#include <string>
#include <vector>

namespace sgmix {

/// Ordered star of a vertex z. Element e is bounded by ray e (its "minus"
/// edge) and ray e + 1 (its "plus" edge), counterclockwise. Interior stars
/// have m rays (indices taken mod m), boundary stars m + 1 rays starting at
/// the boundary edge that precedes the first element counterclockwise.
struct VertexStar {
  int vertex = -1;
  Vec2 z = Vec2::Zero();
  bool interior = false;
  std::vector<int> elements;     // m triangles
  std::vector<int> ray_vertex;   // far endpoint of each ray
  std::vector<Vec2> t;           // unit tangent of each ray
  std::vector<Vec2> n;           // t rotated clockwise: (t_y, -t_x)
  std::vector<double> theta;     // interior angle of each element at z
  std::vector<double> h_minus;   // height of element e over the far end of ray e
  std::vector<double> h_plus;    // height of element e over the far end of ray e + 1

  int m() const { return static_cast<int>(elements.size()); }
  int num_rays() const { return static_cast<int>(t.size()); }
  int ray_minus(int e) const { return e; }
  int ray_plus(int e) const { return interior ? (e + 1) % m() : e + 1; }
};

VertexStar build_star(const Triangulation& mesh, int v);

struct ThetaMetrics {
  double theta_I = 0.0;
  double theta_II = 0.0;
};

/// Only defined for interior stars.
ThetaMetrics theta_metrics(const VertexStar& star);

enum class VertexKind { Boundary, Regular, TypeI, TypeII_Nondegenerate, TypeII_1, TypeII_2, TypeII_3 };

std::string to_string(VertexKind k);
bool is_type_two(VertexKind k);

struct VertexClass {
  int vertex = -1;
  VertexKind kind = VertexKind::Regular;
  double theta_I = 0.0;   // NaN on the boundary
  double theta_II = 0.0;  // NaN on the boundary
  int m = 0;
};

std::vector<VertexClass> classify_vertices(const Triangulation& mesh, double eps_sing = 1e-10);

/// Six-ray imaging star of a Type II vertex: the two directions of each of the
/// three lines through z, sorted counterclockwise from the star's first ray.
/// Sector i lies between imaging rays i and i + 1 and is contained in
/// star.elements[sector_element[i]].
struct ImagingStar {
  std::vector<Vec2> t;
  std::vector<Vec2> n;
  std::vector<double> theta;
  std::vector<int> sector_element;  // index into star.elements
};

ImagingStar imaging_star(const VertexStar& star, double tol = 1e-8);

}  // namespace sgmix
