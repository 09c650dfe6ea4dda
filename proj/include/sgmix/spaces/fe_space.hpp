#pragma once

#include "sgmix/elements/basis.hpp"
#include "sgmix/mesh/triangulation.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace sgmix {

enum class SpaceKind { Stress, Displacement };

/// Where a base DOF lives.
struct DofTag {
  enum class Entity { Vertex, Edge, Cell };
  Entity entity = Entity::Vertex;
  int index = -1;      // vertex, edge or triangle index
  int component = 0;
};

struct SpaceReport {
  std::string kind;
  int k = 0;         // stress degree k, or k with displacement degree k - 1
  int r_or_s = 0;
  int base_dim = 0;
  int n_constraints = 0;
  int rank_constraints = 0;
  int dim = 0;
  nlohmann::json to_json() const;
};

/// Constrained piecewise polynomial space. The base space is C0 (stress,
/// three symmetric components) or discontinuous (displacement, two
/// components), both in a Bernstein basis on the Lagrange lattice. Vertex
/// jet continuity between consecutive star elements is imposed through an
/// explicit nullspace map N from reduced to base coordinates.
class FESpace {
 public:
  /// Sigma_k^r: C0 P_k with derivatives of order <= r continuous at vertices.
  static FESpace stress(std::shared_ptr<const Triangulation> mesh, int k, int r);
  /// Q_{k-1}^s: discontinuous P_{k-1}; s = -1 none, 0 vertex values, 1 values and gradients.
  static FESpace displacement(std::shared_ptr<const Triangulation> mesh, int k, int s);

  SpaceKind kind() const { return kind_; }
  int k() const { return k_; }
  int degree() const { return degree_; }
  int smoothness() const { return smooth_; }
  int num_components() const { return ncomp_; }
  const Triangulation& mesh() const { return *mesh_; }
  std::shared_ptr<const Triangulation> mesh_ptr() const { return mesh_; }

  int scalar_dim() const { return scalar_dim_; }
  int base_dim() const { return ncomp_ * scalar_dim_; }
  int dim() const { return static_cast<int>(N_.cols()); }
  int base_index(int comp, int scalar_dof) const { return comp * scalar_dim_ + scalar_dof; }

  /// Scalar DOFs of triangle t in lattice order.
  const std::vector<int>& element_dofs(int t) const { return elem_dofs_[t]; }
  const ElementBasis& basis(int t) const { return bases_[t]; }
  const std::vector<DofTag>& tags() const { return tags_; }
  /// Base-to-reduced nullspace map (base_dim x dim), orthonormal columns.
  const SpMat& N() const { return N_; }

  SpaceReport report() const { return report_; }

 private:
  FESpace() = default;
  void build_elements(bool continuous);
  void build_constraints();

  SpaceKind kind_ = SpaceKind::Stress;
  std::shared_ptr<const Triangulation> mesh_;
  int k_ = 0;
  int degree_ = 0;
  int smooth_ = 0;
  int ncomp_ = 0;
  int scalar_dim_ = 0;
  std::vector<std::vector<int>> elem_dofs_;
  std::vector<ElementBasis> bases_;
  std::vector<DofTag> tags_;
  SpMat N_;
  SpaceReport report_;
};

/// Space pairs of the mixed method: Sigma_k^r x Q_{k-1}^(r-1).
enum class PairKind { Lagrange, Hermite, C2 };

PairKind parse_pair_kind(const std::string& s);
std::string to_string(PairKind p);
int stress_smoothness(PairKind p);  // 0, 1, 2

struct SpacePair {
  FESpace sigma;
  FESpace q;
};

SpacePair make_pair(std::shared_ptr<const Triangulation> mesh, PairKind pair, int k);

}  // namespace sgmix
