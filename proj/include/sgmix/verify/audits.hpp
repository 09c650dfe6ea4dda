#pragma once

#include "sgmix/mesh/triangulation.hpp"

#include <json.hpp>

#include <cstdint>

namespace sgmix {

/// Constructed dimensions of Sigma_k^2 and Q_{k-1}^1 against their closed
/// forms, plus dim U_{k+2}^4 from its formula.
struct DimensionAudit {
  int k = 0;
  int num_triangles = 0, num_edges = 0, num_vertices = 0;
  int sigma_dim = 0, sigma_formula = 0;
  int q_dim = 0, q_formula = 0;
  int u_formula = 0;
  int alternating_sum = 0;  // u_formula - sigma_dim + q_dim
  bool contractible = false;
  bool ok = false;
  nlohmann::json to_json() const;
};

DimensionAudit dimension_audit(std::shared_ptr<const Triangulation> mesh, int k);

int sigma2_dim_formula(int k, int nt, int ne, int nv);
int q1_dim_formula(int k, int nt, int nv);
int u4_dim_formula(int k, int nt, int ne, int nv);

/// Bubble spaces on a single triangle, built by numerical constraint elimination:
/// U: P_{k+2} with u, grad u, grad^2 u vanishing on the boundary;
/// Sigma: symmetric P_k vanishing on the boundary with vertex derivatives up to order 2 zero;
/// Q: vector P_{k-1} with vertex values and gradients zero.
struct BubbleAudit {
  int k = 0;
  int dim_u = 0, dim_sigma = 0, dim_q = 0;
  int expected_u = 0, expected_sigma = 0, expected_q = 0;
  int rank_div = 0;
  int kernel_dim = 0;
  double rm_moment = 0.0;  // max |(div sigma, p)| / (|div sigma| |p|) over random bubbles and p in RM
  bool ok = false;
  nlohmann::json to_json() const;
};

BubbleAudit bubble_complex_audit(int k, int samples = 20, std::uint64_t seed = 1);

}  // namespace sgmix
