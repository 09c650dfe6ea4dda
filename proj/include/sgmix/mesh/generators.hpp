#pragma once

#include "sgmix/mesh/triangulation.hpp"

#include <string>
#include <vector>

namespace sgmix {

enum class MeshKind { Diagonal, Crisscross };
enum class SplitKind { MorganScott, HsiehCloughTocher, Fishbone };

MeshKind parse_mesh_kind(const std::string& s);
SplitKind parse_split_kind(const std::string& s);
std::string to_string(MeshKind k);
std::string to_string(SplitKind k);

/// n x n grid on the unit square. Diagonal meshes split every cell along
/// (0,0)-(1,1); crisscross meshes add the cell center and use both diagonals.
Triangulation generate_structured(MeshKind kind, int n);

struct SplitResult {
  Triangulation mesh;
  std::vector<int> parent;  // parent triangle (or grid cell for fishbone) per child
};

/// Refine every triangle. The Morgan-Scott parameter r places the interior
/// points at (1 - r) * midpoint(B, C) + r * A and cyclically.
Triangulation split(const Triangulation& mesh, SplitKind kind, double r = 0.25);
SplitResult split_traced(const Triangulation& mesh, SplitKind kind, double r = 0.25);

// Small patches used for rank tables and local checks.
Triangulation single_triangle();                  // A(0,1), B(-0.6,0), C(0.6,0)
Triangulation crisscross_patch();                 // unit square, both diagonals
Triangulation hexagon_patch(double delta = 0.0);  // regular hexagon, center moved by delta*h along (0.6, 0.8)
Triangulation hct_patch();                        // single_triangle split at its barycenter
Triangulation ms_patch(double r = 0.25);          // single_triangle, Morgan-Scott split

}  // namespace sgmix
