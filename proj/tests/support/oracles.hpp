#pragma once
// Brute-force reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numerical routines except where a
// function says so (the dense Example model routes take library matrices as
// their input and re-derive everything downstream).

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "focalis/geomodel.hpp"

namespace oracle {

// ---- scalar Jacobi equation Y'' = -lambdaR Y, Y(0) = 1, Y'(0) = -lambdaA ----

struct JacobiState {
  double y = 1.0;
  double dy = 0.0;
};

/// Classical RK4 states at s_k = k h, k = 0..n.
std::vector<JacobiState> rk4_jacobi_grid(double lambdaR, double lambdaA, double h, int n);

/// Sign changes of Y on (0, s_max], located by a cubic Hermite fit between
/// RK4 nodes and bisection on the fit.
std::vector<double> rk4_jacobi_zeros(double lambdaR, double lambdaA, double s_max, double h = 1e-3);

/// 2 e^{-ks} Y(s) for lambdaR = -k^2 < 0, written without cancellation.
double scaled_hyperbolic_amplitude(double lambdaR, double lambdaA, double s);

// ---- series ----

/// sum_{i <= n} (1/(2i) - 1/(2i-1)) in long double with Richardson
/// extrapolation in 1/n over n, n/2, n/4.
double alternating_harmonic_reference(long n);

// ---- Riemannian curvature of a product of two round 2-spheres ----

/// Embedding of S^2(r1) x S^2(r2) into R^6 through spherical coordinates
/// q = (theta1, phi1, theta2, phi2).
struct SpherePairChart {
  double r1 = 1.0;
  double r2 = 1.0;
  Eigen::VectorXd embed(const Eigen::Vector4d& q) const;
  Eigen::Matrix<double, 6, 4> jacobian(const Eigen::Vector4d& q) const;
  /// R(w, v)v pushed to R^6, for chart vectors w, v at q. Metric from the
  /// jacobian, Christoffel symbols and their derivatives by central
  /// differences, R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik.
  Eigen::VectorXd curvature(const Eigen::Vector4d& q, const Eigen::Vector4d& w, const Eigen::Vector4d& v) const;
};

// ---- Example model ----

/// Moves y back onto M: sphere blocks rescaled (frozen blocks with their last
/// coordinate reset to h_j), frozen odd coordinates zeroed.
Eigen::VectorXd retract(const focalis::geomodel::SphereProductConfig& cfg, const Eigen::VectorXd& y);

/// <II(X, Y), xi> by second differences of retracted lines, in the
/// coordinates of the given tangent basis.
Eigen::MatrixXd second_fundamental_form(const focalis::geomodel::SphereProductConfig& cfg,
                                        const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
                                        const Eigen::MatrixXd& tangent, double t = 1e-3);

/// Tangent part of R(X, xi)xi, column by column, with the round-sphere
/// curvature of each block written out here.
Eigen::MatrixXd jacobi_matrix_from_curvature(const focalis::geomodel::SphereProductConfig& cfg,
                                             const Eigen::VectorXd& xi, const Eigen::MatrixXd& tangent);

struct DenseFocal {
  double radius = 0.0;
  int mult = 0;
};

/// Zeros of det Y(s) for the matrix Jacobi system Y'' = -R Y, Y(0) = I,
/// Y'(0) = -A on (lo, hi]: local minima of min |eig Y| on an RK4 grid,
/// refined by golden-section search, multiplicity from the eigenvalues below
/// `mult_tol` at the minimum.
std::vector<DenseFocal> dense_focal_radii(const Eigen::MatrixXd& A, const Eigen::MatrixXd& R, double lo, double hi,
                                          double h = 1e-3, double mult_tol = 1e-4);

/// Tr(-Y'(r) Y(r)^{-1}) for the same system, RK4 with `steps` steps.
double dense_parallel_trace(const Eigen::MatrixXd& A, const Eigen::MatrixXd& R, double r, int steps);

/// Orthonormal basis of the span of [A W, R W] for a random W with `probes`
/// columns (numerical rank cut at `rank_tol` relative).
Eigen::MatrixXd active_subspace(const Eigen::MatrixXd& A, const Eigen::MatrixXd& R, int probes, std::uint64_t seed,
                                double rank_tol = 1e-10);

// ---- Lie groups ----

using CMatrix = Eigen::MatrixXcd;

/// exp(X) = cos(t) I + sin(t)/t X for X in su(2), t^2 = det X.
CMatrix su2_exp(const CMatrix& x);
/// (i/2)(a sigma_x + b sigma_y + c sigma_z).
CMatrix su2_element(double a, double b, double c);
/// Uniform direction, operator norm drawn from [0, max_norm].
CMatrix random_su2(std::mt19937_64& rng, double max_norm);

/// Low-frequency random smooth su(2)-valued function of t.
struct SmoothSu2Field {
  std::vector<std::array<double, 3>> a;  // cos coefficients
  std::vector<std::array<double, 3>> b;  // sin coefficients
  std::array<double, 3> c{};
  static SmoothSu2Field random(std::mt19937_64& rng, int modes, double scale);
  CMatrix operator()(double t) const;
};

/// g' = u(t) g, g(0) = I by classical RK4 (a different scheme from the
/// library's exponential midpoint stepping).
CMatrix reference_transport(const std::function<CMatrix(double)>& u, int n, int steps);

}  // namespace oracle
