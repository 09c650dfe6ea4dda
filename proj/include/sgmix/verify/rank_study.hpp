#pragma once

#include "sgmix/mesh/star.hpp"
#include "sgmix/spaces/fe_space.hpp"
#include "sgmix/system/rank.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace sgmix {

enum class FunctionalKind { TypeIValue, TypeIGradient, TypeIIAlternating };
std::string to_string(FunctionalKind k);

struct VertexCensus {
  int boundary = 0;
  int regular = 0;
  int type_one = 0;
  int type_two = 0;  // all subtypes
};

VertexCensus census(const std::vector<VertexClass>& classes);

/// 3|V_I| + |V_II| (lagrange), |V_I| (hermite), 0 (c2).
int predicted_deficiency(PairKind pair, const VertexCensus& c);


/// Functional of a piecewise vector field v acting on its one-jets at the
/// star center: sum_t sum_{d,j} W_t(d, j) D_d v_j|_t(z), with rows d = value,
/// d_x, d_y. Type I kinds need a four-element star; TypeIIAlternating uses
/// the star's own rays when it has six elements, imaging rays otherwise.
struct JetFunctional {
  std::vector<int> triangles;
  std::vector<Eigen::Matrix<double, 3, 2>> weights;
  double apply(const std::vector<Eigen::Matrix<double, 3, 2>>& jets) const;
};

JetFunctional jet_functional(const VertexStar& star, FunctionalKind kind, int component = -1);

/// Singular-vertex functional on Q_h, as a coefficient vector in base coordinates.
struct CokernelFunctional {
  int vertex = -1;
  FunctionalKind kind = FunctionalKind::TypeIValue;
  int component = -1;  // TypeIValue only
  Vector coeffs;
};

/// Functionals predicted to annihilate div Sigma_h for the given pair.
std::vector<CokernelFunctional> predicted_functionals(const FESpace& q, const std::vector<VertexClass>& classes,
                                                      PairKind pair);

struct CokernelMatch {
  int measured = 0;
  int predicted = 0;
  double max_angle = 0.0;       // principal angles between the spans (radians)
  int worst_vertex = -1;
  double worst_residual = 0.0;  // largest relative distance of a predicted functional from the measured span
  bool ok = false;
  nlohmann::json to_json() const;
};

/// Compares span(M_q Y) for the measured left nullspace Y with span(N_q^T C).
CokernelMatch cokernel_match(const FESpace& q, const std::vector<CokernelFunctional>& predicted,
                             const RankReport& rank, double angle_tol = 1e-6);

struct RankStudy {
  PairKind pair = PairKind::Lagrange;
  int k = 0;
  SpaceReport sigma;
  SpaceReport q;
  VertexCensus census;
  int predicted = 0;
  RankReport rank;
  bool has_match = false;
  CokernelMatch match;
  double seconds = 0.0;
  nlohmann::json to_json() const;
};

/// Builds the pair, measures the rank of B, and matches the cokernel when
/// deficient (dense mode only).
RankStudy rank_deficiency_report(std::shared_ptr<const Triangulation> mesh, PairKind pair, int k,
                                 RankMode mode = RankMode::Dense, double eps_sing = 1e-10);

}  // namespace sgmix
