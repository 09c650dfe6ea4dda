#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace sgmix {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Invalid input or violated precondition (CLI exit code 2).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical result could not be trusted (CLI exit code 3).
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factorization or solve failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace sgmix
