#pragma once

#include "sgmix/elements/manufactured.hpp"
#include "sgmix/spaces/field.hpp"

#include <memory>
#include <ostream>

namespace Eigen {
template <typename MatrixType>
class UmfPackLU;
}

namespace sgmix {

/// Base-coordinate matrices; the reduced versions are N^T (.) N.
SpMat assemble_A_base(const FESpace& sigma, const Material& mat, double iota);
SpMat assemble_B_base(const FESpace& sigma, const FESpace& q);

/// a_iota(sigma, tau) = iota^2 (grad A sigma, grad tau) + (A sigma, tau) in reduced coordinates.
SpMat assemble_A(const FESpace& sigma, const Material& mat, double iota);
/// b(sigma, q) = (div sigma, q); rows are Q coordinates, columns Sigma coordinates.
SpMat assemble_B(const FESpace& sigma, const FESpace& q);
/// F_i = (f, q_i) in reduced coordinates.
Vector assemble_load(const FESpace& q, const VectorFunction& f, int quad_degree = -1);

/// Reduced mass matrix (per-component L2 product).
SpMat reduced_mass(const FESpace& space);
/// Reduced full H1 Gram matrix sum_c (grad s_c, grad t_c) + (s_c, t_c).
SpMat reduced_h1(const FESpace& space);
/// Reduced Gram matrix of sum_c (grad s_c, grad t_c) + sum_c (int s_c)(int t_c) / |Omega|.
SpMat reduced_h1_gram(const FESpace& space);

struct SaddleSolution {
  Vector sigma;
  Vector u;
  double relative_residual = 0.0;
};

/// Factorization of [A B^T; B 0] reused across right-hand sides.
class SaddleSolver {
 public:
  SaddleSolver(const SpMat& A, const SpMat& B);
  ~SaddleSolver();
  SaddleSolver(const SaddleSolver&) = delete;
  SaddleSolver& operator=(const SaddleSolver&) = delete;

  /// Solves with right-hand side [G; F]; sparse LU plus up to three
  /// refinement steps. Throws NumericalError when the residual stays above tol.
  SaddleSolution solve(const Vector& G, const Vector& F, double tol = 1e-10) const;

 private:
  int n_, m_;
  SpMat K_;
  std::unique_ptr<Eigen::UmfPackLU<SpMat>> lu_;
};

/// Solves [A B^T; B 0] [sigma; u] = [0; F] with a sparse LU and iterative
/// refinement; throws NumericalError when the residual stays above tol.
SaddleSolution solve_saddle(const SpMat& A, const SpMat& B, const Vector& F, double tol = 1e-10);
/// Same with a general right-hand side G in the first block.
SaddleSolution solve_saddle(const SpMat& A, const SpMat& B, const Vector& G, const Vector& F, double tol);

/// Coordinate text: "rows cols nnz" then one "i j value" line per entry (0-based).
void write_coordinate(std::ostream& os, const SpMat& M);

struct StressErrors {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double div = 0.0;
  /// iota |.|_H1 + ||div .|| + ||.||
  double iota_norm(double iota) const { return iota * h1_semi + div + l2; }
};

StressErrors stress_errors(const DiscreteField& sigma_h, const ManufacturedCase& mc, int quad_degree = -1);
double displacement_l2_error(const DiscreteField& u_h, const std::function<Vec2(int, const Vec2&)>& u_ref,
                             int quad_degree = -1);

}  // namespace sgmix
