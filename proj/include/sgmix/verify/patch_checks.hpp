#pragma once

#include "sgmix/mesh/star.hpp"
#include "sgmix/spaces/fe_space.hpp"
#include "sgmix/verify/rank_study.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <memory>

namespace sgmix {

struct NzTCheck {
  std::array<Mat2, 3> numeric;      // grad div phi_i(z) by finite differences of div phi_i
  std::array<Mat2, 3> closed_form;
  double closed_form_error = 0.0;   // max relative Frobenius error
  double annihilation = 0.0;        // max |J_{z,T} : grad div phi_i(z)| / |grad div phi_i(z)|
  double gram_det = 0.0;            // Gram determinant of the normalized images
  nlohmann::json to_json() const;
};

/// phi_1 = psi_z^2 psi_+ psi_- t_- t_-^T, phi_2 (t_+ t_+^T), phi_3 (t_- t_+^T + t_+ t_-^T)
/// on element e of the star. With counterclockwise normals (-n of the star),
/// (grad v)_ij = d_i v_j and s = sin(theta) / (h_+ h_-) the closed forms are
///   s n_- t_-^T,  -s n_+ t_+^T,  s (n_- t_+^T - n_+ t_-^T).
NzTCheck nzt_basis_check(const Triangulation& mesh, const VertexStar& star, int e);

struct ProbeResult {
  int vertex = -1;
  FunctionalKind kind = FunctionalKind::TypeIValue;
  int component = -1;
  int samples = 0;
  double max_abs = 0.0;
  /// max over samples of |F(div tau)| / sum_t |W_t| |jet_t|
  double max_relative = 0.0;
  nlohmann::json to_json() const;
};

/// Applies a vertex functional to div tau for random tau in the stress space
/// of the pair.
ProbeResult necessary_condition_probe(std::shared_ptr<const Triangulation> mesh, int vertex, PairKind pair, int k,
                                      FunctionalKind kind, int component = -1, int samples = 100,
                                      std::uint64_t seed = 1);

}  // namespace sgmix
