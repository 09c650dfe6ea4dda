#pragma once

#include "sgmix/common.hpp"

#include <json.hpp>

#include <string>

namespace sgmix {

/// Auto picks Dense when B fits the dense limits and Sparse otherwise.
enum class RankMode { Dense, Sparse, Auto };

/// Numerical rank of B (rows: Q coordinates, columns: Sigma coordinates).
struct RankReport {
  RankMode mode = RankMode::Dense;
  int rows = 0;
  int cols = 0;
  int rank = 0;
  int deficiency = 0;      // rows - rank
  double sigma_max = 0.0;
  double threshold = 0.0;
  double sigma_last = 0.0;  // smallest retained singular value (or |R_ii| in sparse mode)
  double sigma_next = 0.0;  // largest discarded one (0 if none)
  double gap = 0.0;
  bool trusted = false;     // gap >= min_gap
  double seconds = 0.0;
  Matrix left_null;         // rows x deficiency, orthonormal (dense mode only)
  nlohmann::json to_json() const;
};

/// Dense SVD; rank counts singular values above rel_tol * sigma_max.
RankReport rank_dense(const Matrix& B, double rel_tol = 1e-9, double min_gap = 1e4);
/// Sparse rank-revealing QR of B^T; no left nullspace.
RankReport rank_sparse(const SpMat& B, double rel_tol = 1e-9, double min_gap = 1e4);

/// Principal angles (radians, ascending) between the column spans of X and Y.
Vector principal_angles(const Matrix& X, const Matrix& Y);
/// Orthonormal basis of the column span, dropping directions below rel_tol.
Matrix orthonormal_basis(const Matrix& X, double rel_tol = 1e-10);

}  // namespace sgmix
