#pragma once

#include "sgmix/spaces/fe_space.hpp"
#include "sgmix/system/infsup.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <vector>

namespace sgmix {

struct SurjectivityWitness {
  PairKind pair = PairKind::Lagrange;
  int k = 0;
  int samples = 0;
  double max_residual = 0.0;  // max ||div sigma_h - q_h|| / ||q_h||
  nlohmann::json to_json() const;
};

/// For random q_h, solves min ||sigma||_H1 subject to div sigma = q_h and
/// reports the relative L2 residual of the divergence.
SurjectivityWitness surjectivity_witness(std::shared_ptr<const Triangulation> mesh, PairKind pair, int k,
                                         int samples = 20, std::uint64_t seed = 1);

struct InfSupPoint {
  double delta = 0.0;
  double theta_II = 0.0;
  InfSupResult estimate;
};

struct InfSupStudy {
  std::vector<InfSupPoint> points;
  bool monotone = false;  // beta strictly decreases along the delta sequence
  nlohmann::json to_json() const;
};

/// Inf-sup estimates of the pair on hexagon_patch(delta) with the H1 stress norm.
InfSupStudy infsup_monotonicity(const std::vector<double>& deltas, PairKind pair = PairKind::Lagrange, int k = 7);

}  // namespace sgmix
