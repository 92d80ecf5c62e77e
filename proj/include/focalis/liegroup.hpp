#pragma once

// Matrix Lie algebras, restricted roots of symmetric pairs, and parallel
// transport / holonomy along a curve in a trivialized principal bundle.
//
// Conventions: algebra elements are anti-Hermitian complex matrices; the
// inner product is minus the Killing form; a path u in the algebra is
// transported by g' = u g, g(0) = e, and phi(u) = g(1).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "focalis/tolerances.hpp"

namespace focalis::liegroup {

using Matrix = Eigen::MatrixXcd;

Matrix expm(const Matrix& x);
/// max |X^H + X|
double anti_hermitian_residual(const Matrix& x);
/// max |g^H g - I|
double unitary_residual(const Matrix& g);

class LieAlgebraBasis {
 public:
  /// su2 (basis (i/2) sigma_k), so3 (basis (L_k)_ij = -eps_kij), su3 ((i/2) Gell-Mann),
  /// soN / so_N (E_ij - E_ji, i < j). Throws ValidationError for other names.
  static LieAlgebraBasis load(std::string_view name);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int matrix_size() const { return static_cast<int>(basis_.front().rows()); }
  bool real() const { return real_; }
  bool traceless() const { return traceless_; }

  const Matrix& basis(int i) const { return basis_.at(static_cast<std::size_t>(i)); }
  /// c_ij^k with [e_i, e_j] = sum_k c_ij^k e_k.
  double structure_constant(int i, int j, int k) const { return ad_basis_[i](k, j); }
  /// Matrix of ad(e_i) in basis coordinates.
  const Eigen::MatrixXd& ad_basis(int i) const { return ad_basis_.at(static_cast<std::size_t>(i)); }
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;

  /// Killing form B_ij = tr(ad e_i ad e_j) and the inner product -B.
  const Eigen::MatrixXd& killing() const { return killing_; }
  Eigen::MatrixXd inner_product() const { return -killing_; }
  /// Columns: coordinates of a (-B)-orthonormal basis of the algebra.
  const Eigen::MatrixXd& orthonormal_frame() const { return frame_; }

  Eigen::VectorXd coords(const Matrix& x) const;
  Matrix element(const Eigen::VectorXd& coords) const;
  /// Distance of x from the algebra (anti-Hermitian part, span of the basis).
  double membership_residual(const Matrix& x) const;

  struct Residuals {
    double structure = 0.0;    // [e_i, e_j] vs sum_k c_ij^k e_k
    double antisymmetry = 0.0; // c_ij^k + c_ji^k
    double jacobi = 0.0;
    double invariance = 0.0;   // <[x,y],z> + <y,[x,z]>
    bool killing_negative_definite = false;
  };
  const Residuals& residuals() const { return residuals_; }

 private:
  LieAlgebraBasis(std::string name, std::vector<Matrix> basis, bool real, bool traceless);

  std::string name_;
  std::vector<Matrix> basis_;
  bool real_ = false;
  bool traceless_ = false;
  Eigen::MatrixXd gram_;  // Re tr(e_i^H e_j)
  Eigen::LDLT<Eigen::MatrixXd> gram_solver_;
  std::vector<Eigen::MatrixXd> ad_basis_;
  Eigen::MatrixXd killing_;
  Eigen::MatrixXd frame_;
  Residuals residuals_;
};

/// Involutive automorphism acting on matrices: "conj" (aliases "so2", "so3":
/// complex conjugation), "u1diag" (conjugation by diag(1,-1,...,-1)),
/// "diag:p" (conjugation by diag(I_p, -I_{n-p})), "id".
class Involution {
 public:
  static Involution parse(std::string_view spec, int n);
  Matrix apply(const Matrix& x) const;
  const std::string& name() const { return name_; }

 private:
  enum class Kind { identity, conjugation, diagonal };
  std::string name_;
  Kind kind_ = Kind::identity;
  Eigen::VectorXd signs_;
};

struct Root {
  Eigen::VectorXd values;   // lambda(H_i) on the orthonormal basis H_i of a
  int dim = 0;              // n_a = dim g_lambda (sum of the +-lambda root spaces)
  Eigen::MatrixXd basis;    // orthonormal coordinates (frame coordinates) of g_lambda
};

struct RestrictedRootData {
  std::string algebra;
  std::string involution;
  int N = 0;
  Eigen::MatrixXd k_basis;  // frame coordinates, orthonormal columns
  Eigen::MatrixXd p_basis;
  Eigen::MatrixXd a_basis;
  bool a_diagonal = false;  // a was taken as the diagonal part of p
  Eigen::MatrixXd g0_basis;
  std::vector<Root> roots;  // positive roots
  double eigen_residual = 0.0;  // max |ad(H_i)^2 v + lambda(H_i)^2 v| over root spaces
  double involution_residual = 0.0;
  double abelian_residual = 0.0;

  int n0() const { return static_cast<int>(g0_basis.cols()); }
  int dimension_total() const;
};

/// Throws ValidationError if the involution is not an involutive automorphism
/// or the abelian subspace fails verification.
RestrictedRootData restricted_root_decomposition(const LieAlgebraBasis& alg, const Involution& theta,
                                                 const Tolerances& tol = {}, std::uint64_t seed = 1);

struct BracketReport {
  double max_residual = 0.0;          // with [g_a, g_b] in g_{a+b} + g_{a-b}
  double max_literal_residual = 0.0;  // with [g_a, g_b] in g_{a+b} only (a != b)
  double min_a_action = 0.0;          // min over roots of |[a, g_lambda]|
  std::vector<std::string> violations;
  Eigen::MatrixXd adapted_frame;      // frame coordinates: g0 then each root space
  std::vector<double> adapted_constants;  // c_ij^k in the adapted basis, index (i*N + j)*N + k
  bool passed = false;
};

BracketReport verify_bracket_pattern(const LieAlgebraBasis& alg, const RestrictedRootData& data,
                                     const Tolerances& tol = {});

enum class Interpolation { linear, piecewise_constant };

/// Samples u(t_k), t_k = k/S, k = 0..S.
struct AlgebraPath {
  std::vector<Matrix> samples;
  double speed = 1.0;
  Interpolation interpolation = Interpolation::linear;
  std::string group;  // optional, e.g. "SU2"; used to project numerical results

  int intervals() const { return static_cast<int>(samples.size()) - 1; }
  Matrix at(double t) const;
  void validate(double tol = Tolerances{}.algebra_membership) const;
};

/// Local connection coefficient Gamma(t) = omega(ds/dt) in a trivializing
/// section s of the bundle over the curve.
using ConnectionPath = AlgebraPath;

struct GaugePath {
  std::vector<Matrix> samples;
  int intervals() const { return static_cast<int>(samples.size()) - 1; }
  std::pair<Matrix, Matrix> endpoints() const { return {samples.front(), samples.back()}; }
  void validate(double tol = Tolerances{}.group_membership) const;
};

/// Resamples u on `intervals` uniform intervals, a multiple of u.intervals().
AlgebraPath refined(const AlgebraPath& u, int intervals);

/// Midpoint exponential stepping; steps >= 2 per sample interval.
Matrix transport(const AlgebraPath& u, int steps);
/// g at every sample time t_k; steps must be a multiple of the interval count.
std::vector<Matrix> transport_samples(const AlgebraPath& u, int steps);
/// Same scheme for a field given as a function of t.
Matrix transport_field(const std::function<Matrix(double)>& u, int n, int steps);

/// (g.u)(t) = Ad(g(t)) u(t) + g'(t) g(t)^{-1}.
AlgebraPath gauge_act(const GaugePath& g, const AlgebraPath& u);

/// mu(omega)(t) = -omega(sigma'(t)) along the omega0-horizontal lift sigma:
/// -Ad(k0^{-1})(Gamma - Gamma0), k0 the transport of -Gamma0.
/// The result is sampled on `intervals` uniform intervals (0 keeps the grid of
/// omega); a finer grid reduces the interpolation error of the product.
AlgebraPath pullback_connection(const ConnectionPath& omega, const ConnectionPath& omega0, int steps,
                                int intervals = 0);
/// Reference connection with zero coefficient: mu(omega) = -Gamma.
AlgebraPath pullback_connection(const ConnectionPath& omega);

/// hol with P^omega(u0) = P^omega0(u0) hol: k0(1)^{-1} k(1).
Matrix holonomy_element(const ConnectionPath& omega, const ConnectionPath& omega0, int steps);

/// Gauge transformation of the coefficient: Ad(gamma) Gamma - gamma' gamma^{-1}.
ConnectionPath gauge_connection(const GaugePath& gamma, const ConnectionPath& omega);
/// rho(t) = k0(t)^{-1} gamma(t) k0(t); hol(gamma.omega) = rho(1) hol(omega) rho(0)^{-1}.
GaugePath lambda_c(const GaugePath& gamma, const ConnectionPath& omega0, int steps);

struct HyperpolarReport {
  std::string group;
  std::string k1;
  std::string k2;
  bool involutions_commute = false;
  int group_dim = 0;
  int section_dim = 0;
  int orbit_dim = 0;       // at the sampled points (minimum over samples)
  int dimension_sum = 0;   // orbit_dim + section_dim
  double max_residual = 0.0;  // orbit tangent vs section tangent inner products
  double max_abelian = 0.0;   // max |[H, H']| over the section basis
  int samples = 0;
  bool passed = false;
};

/// K1 x K2 acting on G by (k1, k2) g = k1 g k2^{-1}; candidate section exp(a)
/// with a maximal abelian in p1 and p2.
HyperpolarReport section_orthogonality_check(std::string_view group, std::string_view k1, std::string_view k2,
                                             int n_samples, std::uint64_t seed, const Tolerances& tol = {});

/// "SU2" -> "su2", "SO3" -> "so3", "SU3" -> "su3".
std::string algebra_of_group(std::string_view group);

}  // namespace focalis::liegroup
