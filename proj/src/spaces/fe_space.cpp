#include "sgmix/spaces/fe_space.hpp"

#include "sgmix/mesh/star.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <map>
#include <numeric>

namespace sgmix {

nlohmann::json SpaceReport::to_json() const {
  return {{"kind", kind},         {"k", k},
          {"r_or_s", r_or_s},     {"base_dim", base_dim},
          {"n_constraints", n_constraints}, {"rank_constraints", rank_constraints},
          {"dim", dim}};
}

PairKind parse_pair_kind(const std::string& s) {
  if (s == "lagrange") return PairKind::Lagrange;
  if (s == "hermite") return PairKind::Hermite;
  if (s == "c2") return PairKind::C2;
  throw PreconditionError("unknown pair '" + s + "'");
}

std::string to_string(PairKind p) {
  switch (p) {
    case PairKind::Lagrange: return "lagrange";
    case PairKind::Hermite: return "hermite";
    case PairKind::C2: return "c2";
  }
  return "";
}

int stress_smoothness(PairKind p) { return p == PairKind::Lagrange ? 0 : p == PairKind::Hermite ? 1 : 2; }

SpacePair make_pair(std::shared_ptr<const Triangulation> mesh, PairKind pair, int k) {
  const int r = stress_smoothness(pair);
  return {FESpace::stress(mesh, k, r), FESpace::displacement(mesh, k, r - 1)};
}

FESpace FESpace::stress(std::shared_ptr<const Triangulation> mesh, int k, int r) {
  require(mesh != nullptr, "stress space needs a mesh");
  require(k >= 1 && k <= kMaxBasisDegree - 2, "stress degree k out of supported range");
  require(r >= 0 && r <= 2, "stress smoothness r must be 0, 1 or 2");
  require(k >= r + 1, "stress degree must exceed the vertex smoothness");
  FESpace s;
  s.kind_ = SpaceKind::Stress;
  s.mesh_ = std::move(mesh);
  s.k_ = k;
  s.degree_ = k;
  s.smooth_ = r;
  s.ncomp_ = 3;
  s.build_elements(true);
  s.build_constraints();
  return s;
}

FESpace FESpace::displacement(std::shared_ptr<const Triangulation> mesh, int k, int sm) {
  require(mesh != nullptr, "displacement space needs a mesh");
  require(k >= 2 && k <= kMaxBasisDegree - 1, "displacement degree k - 1 out of supported range");
  require(sm >= -1 && sm <= 1, "displacement smoothness s must be -1, 0 or 1");
  FESpace s;
  s.kind_ = SpaceKind::Displacement;
  s.mesh_ = std::move(mesh);
  s.k_ = k;
  s.degree_ = k - 1;
  s.smooth_ = sm;
  s.ncomp_ = 2;
  s.build_elements(false);
  s.build_constraints();
  return s;
}

void FESpace::build_elements(bool continuous) {
  const Triangulation& m = *mesh_;
  const int k = degree_;
  const auto& nodes = lattice(k);
  const int nloc = poly_dim(k);
  const int nt = m.num_triangles();
  elem_dofs_.assign(nt, std::vector<int>(nloc, -1));
  bases_.clear();
  bases_.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangle(t);
    bases_.emplace_back(k, m.vertex(tri[0]), m.vertex(tri[1]), m.vertex(tri[2]), BasisType::Bernstein);
  }

  std::vector<DofTag> scalar_tags;
  if (!continuous) {
    scalar_dim_ = nt * nloc;
    for (int t = 0; t < nt; ++t) {
      for (int j = 0; j < nloc; ++j) {
        elem_dofs_[t][j] = t * nloc + j;
        scalar_tags.push_back({DofTag::Entity::Cell, t, 0});
      }
    }
  } else {
    const int nv = m.num_vertices(), ne = m.num_edges();
    const int per_edge = k - 1;
    const int n_int = (k - 1) * (k - 2) / 2;
    scalar_dim_ = nv + ne * per_edge + nt * n_int;
    scalar_tags.resize(scalar_dim_);
    for (int v = 0; v < nv; ++v) scalar_tags[v] = {DofTag::Entity::Vertex, v, 0};
    for (int e = 0; e < ne; ++e)
      for (int j = 0; j < per_edge; ++j) scalar_tags[nv + e * per_edge + j] = {DofTag::Entity::Edge, e, 0};
    for (int t = 0; t < nt; ++t) {
      const auto& tri = m.triangle(t);
      int next_int = 0;
      for (int j = 0; j < nloc; ++j) {
        const auto& a = nodes[j];
        int zeros = 0, zero_at = -1, vertex_at = -1;
        for (int i = 0; i < 3; ++i) {
          if (a[i] == 0) {
            ++zeros;
            zero_at = i;
          }
          if (a[i] == k) vertex_at = i;
        }
        int dof;
        if (vertex_at >= 0) {
          dof = tri[vertex_at];
        } else if (zeros == 1) {
          const int e = m.triangle_edge(t, zero_at);
          const int li = (zero_at + 1) % 3, lj = (zero_at + 2) % 3;
          // Position counted from the lower-numbered endpoint.
          const int steps = tri[li] == m.edges()[e].v0 ? a[lj] : a[li];
          dof = nv + e * per_edge + (steps - 1);
        } else {
          const int d = nv + ne * per_edge + t * n_int + next_int++;
          scalar_tags[d] = {DofTag::Entity::Cell, t, 0};
          dof = d;
        }
        elem_dofs_[t][j] = dof;
      }
    }
  }
  tags_.clear();
  for (int c = 0; c < ncomp_; ++c)
    for (DofTag tag : scalar_tags) {
      tag.component = c;
      tags_.push_back(tag);
    }
}

namespace {

struct VertexRows {
  std::vector<std::map<int, double>> rows;
  std::vector<int> dofs;
};

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

void FESpace::build_constraints() {
  const Triangulation& m = *mesh_;
  const int k = degree_;
  const auto& nodes = lattice(k);
  const int min_order = kind_ == SpaceKind::Stress ? 1 : 0;
  const int max_order = smooth_;
  const int nv = m.num_vertices();

  std::vector<VertexRows> vrows(nv);
  if (max_order >= min_order) {
    for (int v = 0; v < nv; ++v) {
      const VertexStar star = build_star(m, v);
      const int ms = star.m();
      const int npairs = star.interior ? ms : ms - 1;
      if (npairs <= 0 || (star.interior && ms < 2)) continue;
      double hv = 0.0;
      for (int rv : star.ray_vertex) hv += (m.vertex(rv) - star.z).norm();
      hv /= star.ray_vertex.size();

      // Jet rows of each star element restricted to the nodes that can contribute.
      struct Local {
        std::vector<int> dofs;
        Matrix D;  // derivative rows x local nodes
      };
      std::vector<Local> loc(ms);
      for (int e = 0; e < ms; ++e) {
        const int t = star.elements[e];
        const auto& tri = m.triangle(t);
        const int li = static_cast<int>(std::find(tri.begin(), tri.end(), v) - tri.begin());
        const Matrix D = bases_[t].eval(star.z, max_order);
        std::vector<int> cols;
        for (int j = 0; j < static_cast<int>(nodes.size()); ++j)
          if (nodes[j][li] >= k - max_order) cols.push_back(j);
        loc[e].D.resize(D.rows(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
          loc[e].D.col(c) = D.col(cols[c]);
          loc[e].dofs.push_back(elem_dofs_[t][cols[c]]);
        }
      }
      for (int p = 0; p < npairs; ++p) {
        const int ea = p, eb = (p + 1) % ms;
        for (int ord = min_order; ord <= max_order; ++ord) {
          const double sc = std::pow(hv, ord);
          for (int q = 0; q <= ord; ++q) {
            const int row = deriv_index(ord - q, q);
            std::map<int, double> r;
            for (std::size_t c = 0; c < loc[ea].dofs.size(); ++c) r[loc[ea].dofs[c]] += sc * loc[ea].D(row, c);
            for (std::size_t c = 0; c < loc[eb].dofs.size(); ++c) r[loc[eb].dofs[c]] -= sc * loc[eb].D(row, c);
            vrows[v].rows.push_back(std::move(r));
          }
        }
      }
      for (const auto& r : vrows[v].rows)
        for (const auto& [d, val] : r) vrows[v].dofs.push_back(d);
      std::sort(vrows[v].dofs.begin(), vrows[v].dofs.end());
      vrows[v].dofs.erase(std::unique(vrows[v].dofs.begin(), vrows[v].dofs.end()), vrows[v].dofs.end());
    }
  }

  // Merge vertices whose constraint supports overlap.
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> owner(scalar_dim_, -1);
  for (int v = 0; v < nv; ++v) {
    for (int d : vrows[v].dofs) {
      if (owner[d] < 0) {
        owner[d] = v;
      } else {
        const int a = find_root(parent, owner[d]), b = find_root(parent, v);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  struct Block {
    std::vector<int> dofs;
    Matrix null;
    int rows = 0;
    int rank = 0;
  };
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < nv; ++v)
    if (!vrows[v].rows.empty()) groups[find_root(parent, v)].push_back(v);

  std::vector<Block> blocks;
  std::vector<char> constrained(scalar_dim_, 0);
  int total_rows = 0, total_rank = 0;
  for (const auto& [root, verts] : groups) {
    Block b;
    for (int v : verts) b.dofs.insert(b.dofs.end(), vrows[v].dofs.begin(), vrows[v].dofs.end());
    std::sort(b.dofs.begin(), b.dofs.end());
    b.dofs.erase(std::unique(b.dofs.begin(), b.dofs.end()), b.dofs.end());
    std::map<int, int> col;
    for (std::size_t i = 0; i < b.dofs.size(); ++i) col[b.dofs[i]] = static_cast<int>(i);
    for (int v : verts) b.rows += static_cast<int>(vrows[v].rows.size());
    Matrix C = Matrix::Zero(b.rows, b.dofs.size());
    int ri = 0;
    for (int v : verts)
      for (const auto& r : vrows[v].rows) {
        for (const auto& [d, val] : r) C(ri, col[d]) = val;
        ++ri;
      }
    const double tol = 1e-9 * C.rowwise().norm().maxCoeff();
    Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (int i = 0; i < sv.size(); ++i) b.rank += sv(i) > tol ? 1 : 0;
    b.null = svd.matrixV().rightCols(static_cast<int>(b.dofs.size()) - b.rank);
    for (int d : b.dofs) constrained[d] = 1;
    total_rows += b.rows;
    total_rank += b.rank;
    blocks.push_back(std::move(b));
  }

  std::vector<Triplet> trip;
  int col = 0;
  for (int c = 0; c < ncomp_; ++c)
    for (int d = 0; d < scalar_dim_; ++d)
      if (!constrained[d]) trip.emplace_back(base_index(c, d), col++, 1.0);
  for (int c = 0; c < ncomp_; ++c)
    for (const Block& b : blocks)
      for (int j = 0; j < b.null.cols(); ++j) {
        for (std::size_t i = 0; i < b.dofs.size(); ++i)
          if (b.null(i, j) != 0.0) trip.emplace_back(base_index(c, b.dofs[i]), col, b.null(i, j));
        ++col;
      }
  N_.resize(base_dim(), col);
  N_.setFromTriplets(trip.begin(), trip.end());
  N_.makeCompressed();

  report_.kind = kind_ == SpaceKind::Stress ? "stress" : "displacement";
  report_.k = k_;
  report_.r_or_s = smooth_;
  report_.base_dim = base_dim();
  report_.n_constraints = ncomp_ * total_rows;
  report_.rank_constraints = ncomp_ * total_rank;
  report_.dim = col;
}

}  // namespace sgmix
