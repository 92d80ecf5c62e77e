#include "focalis/greenop.hpp"

#include <cmath>
#include <string>

#include "focalis/errors.hpp"

namespace focalis::greenop {
namespace {

void require_length(const OperatorMatrix& op, const Eigen::VectorXd& v, const char* what) {
  if (v.size() != op.dim()) throw ValidationError(std::string(what) + " has the wrong length");
}

}  // namespace

OperatorMatrix::OperatorMatrix(Eigen::MatrixXd matrix, double symmetry_tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) throw ValidationError("operator matrix must be square and non-empty");
  if (!matrix_.allFinite()) throw ValidationError("operator matrix has non-finite entries");
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  symmetry_residual_ = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() / scale;
  if (symmetry_residual_ > symmetry_tol) throw ValidationError("operator matrix is not symmetric");
  eigen_.compute(matrix_);
}

Eigen::VectorXd green_apply(const OperatorMatrix& op, const Eigen::VectorXd& psi, NullMode mode, double invertibility) {
  require_length(op, psi, "psi");
  const auto& lambda = op.eigenvalues();
  const auto& eta = op.eigenvectors();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  Eigen::VectorXd coeff = eta.transpose() * psi;
  for (int i = 0; i < op.dim(); ++i) {
    if (std::abs(lambda(i)) <= invertibility * scale) {
      if (mode == NullMode::error) {
        throw SingularOperator("operator is singular: eigenvalue " + std::to_string(lambda(i)) + " at index " +
                                   std::to_string(i) + " is below the invertibility tolerance",
                               i);
      }
      coeff(i) = 0.0;
    } else {
      coeff(i) /= lambda(i);
    }
  }
  return eta * coeff;
}

Eigen::MatrixXd green_kernel(const OperatorMatrix& op, double invertibility) {
  const auto& lambda = op.eigenvalues();
  const auto& eta = op.eigenvectors();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  const int n = op.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (std::abs(lambda(k)) <= invertibility * scale) {
      throw SingularOperator("operator is singular at eigen index " + std::to_string(k), k);
    }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) g(i, j) += eta(i, k) * eta(j, k) / lambda(k);
  }
  return g;
}

Eigen::VectorXd green_kernel_apply(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& psi) {
  if (kernel.cols() != psi.size()) throw ValidationError("psi has the wrong length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kernel.rows());
  for (int i = 0; i < kernel.rows(); ++i)
    for (int j = 0; j < kernel.cols(); ++j) out(i) += kernel(i, j) * psi(j);
  return out;
}

OperatorMatrix box_operator_1d(int samples, double speed, bool periodic) {
  if (samples < 4) throw ValidationError("box operator needs at least 4 samples");
  if (!(speed > 0.0)) throw ValidationError("speed must be > 0");
  const int S = samples;
  const double h = 1.0 / S;
  const double c = 1.0 / (speed * speed * h * h);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(S, S);
  for (int i = 0; i < S; ++i) {
    m(i, i) += 2.0 * c;
    if (i > 0) m(i, i - 1) -= c;
    if (i + 1 < S) m(i, i + 1) -= c;
  }
  if (periodic) {
    m(0, S - 1) -= c;
    m(S - 1, 0) -= c;
  } else {
    // Reflecting (cell-centred) boundary: the ghost value equals the edge value.
    m(0, 0) -= c;
    m(S - 1, S - 1) -= c;
  }
  return OperatorMatrix(std::move(m));
}

double ls2_inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const OperatorMatrix& op, double s) {
  require_length(op, u, "u");
  require_length(op, v, "v");
  if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("ls2 exponent must be >= 0");
  if (s == 0.0) return u.dot(v);
  const auto& lambda = op.eigenvalues();
  const bool integral = std::floor(s) == s;
  Eigen::VectorXd weights(op.dim());
  for (int i = 0; i < op.dim(); ++i) {
    if (!integral && lambda(i) < 0.0) throw ValidationError("fractional power of an operator with negative eigenvalues");
    weights(i) = std::pow(lambda(i), s);
  }
  const Eigen::VectorXd cu = op.eigenvectors().transpose() * u;
  const Eigen::VectorXd cv = op.eigenvectors().transpose() * v;
  return (cu.array() * weights.array() * cv.array()).sum();
}

}  // namespace focalis::greenop
