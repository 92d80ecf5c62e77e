#pragma once

// The product-of-spheres example at finite truncation.
//
// Ambient coordinates are laid out as [block 1 | block 2 | ... | block K | odd],
// block k carrying m_k coordinates on a round sphere of radius r_k and the odd
// part being flat. For j <= k1 the last coordinate of block j is frozen to
// h_j = sqrt(r_j^2 - r'_j^2), so that the remaining coordinates of the block
// run over a sphere of radius r'_j; the first k2 odd coordinates are zero.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "focalis/focal.hpp"
#include "focalis/spectral.hpp"
#include "focalis/tolerances.hpp"

namespace focalis::geomodel {

struct Block {
  int m = 2;
  double r = 1.0;
};

struct SphereProductConfig {
  std::vector<Block> blocks;
  int k1 = 0;
  std::vector<double> rprime;  // size k1, 0 < r'_j < r_j
  int k2 = 0;
  int N = 0;                   // ambient dimension, >= sum of m_k + k2

  /// K = 4, N = 64.
  static SphereProductConfig defaults();
  void validate() const;  // throws ValidationError

  int block_dim() const;        // sum of m_k
  int block_offset(int k) const;  // first coordinate of block k (0-based)
  int odd_offset() const { return block_dim(); }
  double frozen_height(int j) const;  // h_j for j < k1
  int tangent_dim() const;      // N - K - k1 - k2
  int normal_dim() const { return k1 + k2; }  // inside the product of spheres
};

/// A parallel normal field, described by its invariants: coefficients c_j of
/// the unit normals n_j (j < k1) and the constant odd components (size k2).
struct NormalField {
  std::vector<double> block_coeffs;
  std::vector<double> odd;
};

class ModelSubmanifold {
 public:
  ModelSubmanifold(SphereProductConfig config, std::vector<Eigen::VectorXd> points);

  const SphereProductConfig& config() const { return config_; }
  std::size_t size() const { return points_.size(); }
  const Eigen::VectorXd& point(std::size_t i) const { return points_.at(i); }

  /// Euclidean gradients of the defining constraints at point i: sphere
  /// equations (K columns), frozen coordinates (k1), frozen odd coordinates (k2).
  Eigen::MatrixXd constraint_gradients(std::size_t i) const;
  /// Orthonormal basis of T_x M, N x tangent_dim.
  Eigen::MatrixXd tangent_basis(std::size_t i) const;
  /// Orthonormal basis of the normal space inside the product of spheres,
  /// ordered n_1..n_k1 then the frozen odd directions.
  Eigen::MatrixXd normal_basis(std::size_t i) const;
  /// Unit normal n_j of block j (pointing toward increasing last coordinate).
  Eigen::VectorXd block_normal(std::size_t i, int j) const;
  Eigen::VectorXd normal_vector(std::size_t i, const NormalField& field) const;
  /// Inverse of normal_vector; throws ValidationError if xi is not normal.
  NormalField decompose(std::size_t i, const Eigen::VectorXd& xi,
                        double tol = Tolerances{}.normal_residual) const;
  /// Largest violation of the defining equations at point i.
  double constraint_residual(std::size_t i) const;
  /// dim (E_j)_x for j < k1, by principal-angle rank computation.
  std::vector<int> block_eigenspace_dims(std::size_t i) const;

 private:
  SphereProductConfig config_;
  std::vector<Eigen::VectorXd> points_;
};

ModelSubmanifold build_model(const SphereProductConfig& config, int n_points, std::uint64_t seed);

/// Round-sphere curvature applied blockwise: R(w, v)v.
Eigen::VectorXd ambient_curvature(const SphereProductConfig& config, const Eigen::VectorXd& w,
                                  const Eigen::VectorXd& v);

/// Eigendata of an operator that is scalar on each (E_j)_x; block 0 is (E_0)_x
/// and blocks 1..k1 are the constrained blocks.
struct BlockEigen {
  int block = 0;
  double value = 0.0;
  int mult = 0;
};

struct BlockOperator {
  std::vector<BlockEigen> blocks;
  spectral::SpectralData spectrum() const;
};

BlockOperator normal_jacobi_operator(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi);
BlockOperator shape_operator(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi);
focal::EigenGrid eigen_grid_of(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi);

/// Regularized trace of the shape operator from the block dimensions, and the
/// same sum with the printed multiplicity factor (m_j - 1).
struct TraceClosedForm {
  double from_block_dims = 0.0;
  double with_printed_factor = 0.0;
  bool mismatch = false;
};
TraceClosedForm shape_trace_closed_form(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi);

/// Dense matrices in the coordinates of tangent_basis(i).
/// The shape operator is computed from the second fundamental form of the
/// defining equations, A = -sum_c mu_c Hess(F_c)|_T with xi = sum_c mu_c grad F_c.
Eigen::MatrixXd shape_operator_matrix(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi,
                                      const Eigen::MatrixXd& tangent);
Eigen::MatrixXd normal_jacobi_matrix(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi,
                                     const Eigen::MatrixXd& tangent);

struct CommutatorReport {
  int trials = 0;
  double max_commutator = 0.0;  // Frobenius norm of [A, R]
  bool passed = false;
};

/// Optional hook applied to the dense shape operator before the commutator is
/// taken (used for negative controls).
using MatrixPerturbation = std::function<void(Eigen::MatrixXd&)>;

CommutatorReport curvature_adapted_check(const ModelSubmanifold& model, int n_trials, std::uint64_t seed,
                                         double tol = Tolerances{}.commutator,
                                         const MatrixPerturbation& perturb = {});

NormalField random_normal_field(const SphereProductConfig& config, std::uint64_t seed);

/// Full verification of the example: per-point commutators, regularized mean
/// curvature of parallel submanifolds and focal sets.
struct PointReport {
  std::size_t index = 0;
  double constraint_residual = 0.0;
  double commutator = 0.0;
  double tr_shape = 0.0;          // regularized trace from block data
  double tr_shape_dense = 0.0;    // trace of the dense matrix
  double tr_shape_printed = 0.0;  // with the printed multiplicity factor
  std::vector<std::optional<double>> mean_curvature;  // per radius
  focal::FocalRadiusSet focal;
};

struct Example41Report {
  NormalField field;
  std::vector<double> radii;
  std::vector<int> block_dims;  // dim (E_j)_x at the first point
  std::vector<int> printed_dims;  // m_j - 1
  bool multiplicity_mismatch = false;
  std::vector<PointReport> points;
  double max_commutator = 0.0;
  double max_constraint_residual = 0.0;
  double max_mean_curvature_spread = 0.0;  // per radius, max - min across points
  bool weakly_isoparametric = false;
  bool isoparametric = false;
  bool equifocal = false;
  bool passed = false;
};

Example41Report verify_example41(const ModelSubmanifold& model, const NormalField& field,
                                 const std::vector<double>& radii, const focal::Window& window,
                                 const Tolerances& tol = {});

}  // namespace focalis::geomodel
