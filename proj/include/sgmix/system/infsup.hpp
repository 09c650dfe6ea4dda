#pragma once

#include "sgmix/common.hpp"

namespace sgmix {

struct InfSupResult {
  double beta = 0.0;        // smallest nonzero generalized singular value
  double beta_max = 0.0;    // largest one
  int zero_modes = 0;       // generalized singular values below rel_tol * beta_max
};

/// Generalized singular values of B with respect to the Gram matrices G
/// (stress norm) and M (displacement L2): B G^{-1} B^T y = beta^2 M y.
InfSupResult infsup_estimate(const Matrix& G, const Matrix& M, const Matrix& B, double rel_tol = 1e-9);

}  // namespace sgmix
