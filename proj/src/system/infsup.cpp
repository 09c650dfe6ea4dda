#include "sgmix/system/infsup.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace sgmix {

InfSupResult infsup_estimate(const Matrix& G, const Matrix& M, const Matrix& B, double rel_tol) {
  require(G.rows() == G.cols() && M.rows() == M.cols(), "Gram matrices must be square");
  require(B.rows() == M.rows() && B.cols() == G.rows(), "B does not match the Gram matrices");
  require(B.rows() <= 6000 && B.cols() <= 8000, "inf-sup estimate limited to dense desk-scale problems");
  Eigen::LLT<Matrix> lg(G), lm(M);
  if (lg.info() != Eigen::Success || lm.info() != Eigen::Success) {
    throw NumericalError("inf-sup estimate: Gram matrix is not positive definite");
  }
  // Z = L_M^{-1} B L_G^{-T}
  const Matrix X = lg.matrixL().solve(B.transpose()).transpose();
  const Matrix Z = lm.matrixL().solve(X);
  Eigen::BDCSVD<Matrix> svd(Z);
  const Vector& s = svd.singularValues();
  InfSupResult r;
  r.beta_max = s.size() ? s(0) : 0.0;
  const int n = static_cast<int>(std::min(Z.rows(), Z.cols()));
  r.zero_modes = static_cast<int>(Z.rows()) - n;
  for (int i = 0; i < n; ++i) {
    if (s(i) > rel_tol * r.beta_max) {
      r.beta = s(i);
    } else {
      ++r.zero_modes;
    }
  }
  return r;
}

}  // namespace sgmix
