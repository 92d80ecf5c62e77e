#pragma once

// Green operators of invertible symmetric operators through their eigenbasis,
// and a one-dimensional model of the weighted inner product <u, L^s v>.

#include <Eigen/Dense>

#include "focalis/tolerances.hpp"

namespace focalis::greenop {

class OperatorMatrix {
 public:
  /// Throws ValidationError when the matrix is not square or not symmetric.
  explicit OperatorMatrix(Eigen::MatrixXd matrix, double symmetry_tol = Tolerances{}.symmetry);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return eigen_.eigenvalues(); }
  const Eigen::MatrixXd& eigenvectors() const { return eigen_.eigenvectors(); }
  double symmetry_residual() const { return symmetry_residual_; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_;
  double symmetry_residual_ = 0.0;
};

enum class NullMode {
  error,    // throw SingularOperator naming the near-null eigenvector
  project,  // drop the near-null directions (solution on their complement)
};

/// sigma = sum_i lambda_i^{-1} <psi, eta_i> eta_i.
Eigen::VectorXd green_apply(const OperatorMatrix& op, const Eigen::VectorXd& psi, NullMode mode = NullMode::error,
                            double invertibility = Tolerances{}.invertibility);

/// Kernel G(i, j) = sum_k lambda_k^{-1} eta_k(i) eta_k(j).
Eigen::MatrixXd green_kernel(const OperatorMatrix& op, double invertibility = Tolerances{}.invertibility);
/// sigma(i) = sum_j G(i, j) psi(j).
Eigen::VectorXd green_kernel_apply(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& psi);

/// id - (1/a^2) D^2 on S samples of [0, 1], h = 1/S; periodic or Neumann.
OperatorMatrix box_operator_1d(int samples, double speed, bool periodic);

/// <u, L^s v> through the eigendecomposition.
double ls2_inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const OperatorMatrix& op, double s);

}  // namespace focalis::greenop
