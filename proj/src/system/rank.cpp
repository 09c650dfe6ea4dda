#include "sgmix/system/rank.hpp"

#include <Eigen/SPQRSupport>
#include <Eigen/SVD>

#include <chrono>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sgmix {

namespace {

double finish_gap(RankReport& r, double min_gap) {
  const double floor = std::numeric_limits<double>::epsilon() * r.sigma_max;
  r.gap = r.rank == 0 ? 0.0 : r.sigma_last / std::max(r.sigma_next, floor);
  r.trusted = r.gap >= min_gap;
  return r.gap;
}

}  // namespace

nlohmann::json RankReport::to_json() const {
  return {{"mode", mode == RankMode::Dense ? "dense" : "sparse"},
          {"rows", rows},
          {"cols", cols},
          {"rank", rank},
          {"deficiency", deficiency},
          {"sigma_max", sigma_max},
          {"threshold", threshold},
          {"sigma_last", sigma_last},
          {"sigma_next", sigma_next},
          {"gap", gap},
          {"trusted", trusted}};
}

RankReport rank_dense(const Matrix& B, double rel_tol, double min_gap) {
  const auto t0 = std::chrono::steady_clock::now();
  RankReport r;
  r.mode = RankMode::Dense;
  r.rows = static_cast<int>(B.rows());
  r.cols = static_cast<int>(B.cols());
  const bool wide = B.rows() <= B.cols();
  Eigen::BDCSVD<Matrix> svd(B, wide ? Eigen::ComputeThinU : Eigen::ComputeFullU);
  const Vector& s = svd.singularValues();
  r.sigma_max = s.size() ? s(0) : 0.0;
  r.threshold = rel_tol * r.sigma_max;
  for (int i = 0; i < s.size(); ++i) r.rank += s(i) > r.threshold ? 1 : 0;
  r.deficiency = r.rows - r.rank;
  r.sigma_last = r.rank > 0 ? s(r.rank - 1) : 0.0;
  r.sigma_next = r.rank < s.size() ? s(r.rank) : 0.0;
  finish_gap(r, min_gap);
  r.left_null = svd.matrixU().rightCols(r.deficiency);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

RankReport rank_sparse(const SpMat& B, double rel_tol, double min_gap) {
  const auto t0 = std::chrono::steady_clock::now();
  RankReport r;
  r.mode = RankMode::Sparse;
  r.rows = static_cast<int>(B.rows());
  r.cols = static_cast<int>(B.cols());
  SpMat Bt = B.transpose();
  Bt.makeCompressed();
  // sigma_max estimate: largest column norm of B^T bounds it from below within sqrt(rows).
  double cmax = 0.0;
  for (int k = 0; k < Bt.outerSize(); ++k) {
    double c = 0.0;
    for (SpMat::InnerIterator it(Bt, k); it; ++it) c += it.value() * it.value();
    cmax = std::max(cmax, std::sqrt(c));
  }
  r.sigma_max = cmax;
  r.threshold = rel_tol * cmax;
  Eigen::SPQR<SpMat> qr;
  qr.setPivotThreshold(r.threshold);
  qr.compute(Bt);
  if (qr.info() != Eigen::Success) throw NumericalError("sparse QR failed");
  r.rank = static_cast<int>(qr.rank());
  r.deficiency = r.rows - r.rank;
  const SpMat R = qr.matrixR();
  double dmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < r.rank; ++i) dmin = std::min(dmin, std::abs(R.coeff(i, i)));
  r.sigma_last = r.rank > 0 ? dmin : 0.0;
  // Discarded columns have norm below the threshold; the gap is measured against it.
  r.sigma_next = r.deficiency > 0 ? r.threshold : 0.0;
  finish_gap(r, min_gap);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Matrix orthonormal_basis(const Matrix& X, double rel_tol) {
  if (X.cols() == 0) return Matrix(X.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s(i) > rel_tol * s(0) ? 1 : 0;
  return svd.matrixU().leftCols(r);
}

Vector principal_angles(const Matrix& X, const Matrix& Y) {
  Matrix Qa = orthonormal_basis(X), Qb = orthonormal_basis(Y);
  if (Qa.cols() < Qb.cols()) std::swap(Qa, Qb);
  const int n = static_cast<int>(Qb.cols());
  if (n == 0) return Vector(0);
  // Sines of the angles are the singular values of the part of Qb outside span(Qa);
  // they stay accurate for tiny angles where cosines do not.
  const Matrix P = Qb - Qa * (Qa.transpose() * Qb);
  Eigen::JacobiSVD<Matrix> svd(P);
  Vector ang(n);
  for (int i = 0; i < n; ++i) ang(i) = std::asin(std::min(1.0, svd.singularValues()(i)));
  std::sort(ang.data(), ang.data() + n);
  return ang;
}

}  // namespace sgmix
