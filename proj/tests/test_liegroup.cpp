#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "focalis/errors.hpp"
#include "focalis/liegroup.hpp"
#include "support/oracles.hpp"

using namespace focalis;
using namespace focalis::liegroup;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

AlgebraPath sampled(const std::function<Matrix(double)>& f, int S, Interpolation mode = Interpolation::linear) {
  AlgebraPath p;
  p.interpolation = mode;
  p.group = "SU2";
  for (int k = 0; k <= S; ++k) p.samples.push_back(f(static_cast<double>(k) / S));
  return p;
}

GaugePath sampled_gauge(const std::function<Matrix(double)>& f, int S) {
  GaugePath g;
  for (int k = 0; k <= S; ++k) g.samples.push_back(f(static_cast<double>(k) / S));
  return g;
}

}  // namespace

TEST(Algebra, Su2StructureConstants) {
  const auto su2 = LieAlgebraBasis::load("su2");
  ASSERT_EQ(su2.dim(), 3);
  // [e_i, e_j] = -eps_ijk e_k for e_i = (i/2) sigma_i
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const Matrix br = su2.basis(i) * su2.basis(j) - su2.basis(j) * su2.basis(i);
        const std::complex<double> coeff = (br * su2.basis(k).adjoint()).trace() / (su2.basis(k) * su2.basis(k).adjoint()).trace();
        EXPECT_NEAR(su2.structure_constant(i, j, k), coeff.real(), 1e-15);
        const int eps = (i == j || j == k || i == k) ? 0 : (((j - i + 3) % 3 == 1) ? 1 : -1);
        EXPECT_NEAR(su2.structure_constant(i, j, k), -eps, 1e-15);
      }
}

TEST(Algebra, InvariantsAndKilling) {
  for (const char* name : {"su2", "so3", "su3", "so4", "so_5", "so7"}) {
    const auto alg = LieAlgebraBasis::load(name);
    const auto& r = alg.residuals();
    EXPECT_LT(r.structure, 1e-12) << name;
    EXPECT_LT(r.antisymmetry, 1e-12) << name;
    EXPECT_LT(r.jacobi, 1e-12) << name;
    EXPECT_LT(r.invariance, 1e-12) << name;
    EXPECT_TRUE(r.killing_negative_definite) << name;
    // -B from traces of ad matrices computed here
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j)
        EXPECT_NEAR(alg.killing()(i, j), (alg.ad_basis(i) * alg.ad_basis(j)).trace(), 1e-12);
  }
  const auto su2 = LieAlgebraBasis::load("su2");
  const Eigen::MatrixXd b = su2.killing();
  EXPECT_LT((b - Eigen::MatrixXd(b.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(LieAlgebraBasis::load("sl2"), ValidationError);
  EXPECT_THROW(LieAlgebraBasis::load("so2"), ValidationError);
}

TEST(Algebra, So3IsomorphicToSu2) {
  const auto su2 = LieAlgebraBasis::load("su2");
  const auto so3 = LieAlgebraBasis::load("so3");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      // e_i -> -L_i flips the sign of every constant
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(su2.structure_constant(i, j, k), -so3.structure_constant(i, j, k), 1e-15);
}

TEST(Roots, Su2OverSo2) {
  const auto alg = LieAlgebraBasis::load("su2");
  const auto data = restricted_root_decomposition(alg, Involution::parse("conj", 2));
  EXPECT_EQ(data.a_basis.cols(), 1);
  EXPECT_EQ(data.n0(), 1);
  ASSERT_EQ(data.roots.size(), 1u);
  EXPECT_EQ(data.roots[0].dim, 2);
  EXPECT_EQ(data.dimension_total(), 3);
  EXPECT_LT(data.eigen_residual, 1e-9);
  const auto br = verify_bracket_pattern(alg, data);
  EXPECT_TRUE(br.passed);
  EXPECT_GT(br.min_a_action, 0.1);
}

TEST(Roots, Su3OverSo3IsA2) {
  const auto alg = LieAlgebraBasis::load("su3");
  const auto data = restricted_root_decomposition(alg, Involution::parse("conj", 3));
  EXPECT_EQ(data.a_basis.cols(), 2);
  EXPECT_EQ(data.n0(), 2);
  ASSERT_EQ(data.roots.size(), 3u);
  for (const auto& r : data.roots) EXPECT_EQ(r.dim, 2);  // multiplicity 1 for +-lambda
  EXPECT_EQ(data.dimension_total(), 8);
  // A2: the three positive roots have equal length and one is the sum of the others
  std::vector<Eigen::VectorXd> v;
  for (const auto& r : data.roots) v.push_back(r.values);
  for (const auto& x : v) EXPECT_NEAR(x.norm(), v[0].norm(), 1e-9);
  double best = 1e9;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (i != j && j != k && i != k)
          for (double s1 : {1.0, -1.0})
            for (double s2 : {1.0, -1.0}) best = std::min(best, (s1 * v[i] + s2 * v[j] - v[k]).norm());
  EXPECT_LT(best, 1e-9);
  const auto br = verify_bracket_pattern(alg, data);
  EXPECT_TRUE(br.passed);
  EXPECT_LT(br.max_residual, 1e-9);
}

TEST(Roots, G0ContainsA) {
  for (auto [name, theta] : {std::pair{"su3", "conj"}, std::pair{"so5", "diag:2"}, std::pair{"su3", "u1diag"}}) {
    const auto alg = LieAlgebraBasis::load(name);
    const auto data = restricted_root_decomposition(alg, Involution::parse(theta, alg.matrix_size()));
    const Eigen::MatrixXd proj = data.g0_basis * data.g0_basis.transpose();
    EXPECT_LT((proj * data.a_basis - data.a_basis).cwiseAbs().maxCoeff(), 1e-10) << name;
    EXPECT_EQ(data.dimension_total(), alg.dim()) << name;
    EXPECT_TRUE(verify_bracket_pattern(alg, data).passed) << name;
  }
}

TEST(Roots, RejectsUnknownInvolution) {
  EXPECT_THROW(Involution::parse("bogus", 3), ValidationError);
}

TEST(Roots, IdentityInvolutionIsTrivial) {
  const auto alg = LieAlgebraBasis::load("su3");
  const auto data = restricted_root_decomposition(alg, Involution::parse("id", 3));
  EXPECT_EQ(data.a_basis.cols(), 0);
  EXPECT_TRUE(data.roots.empty());
  EXPECT_EQ(data.n0(), alg.dim());
}

TEST(Transport, ZeroAndConstant) {
  const auto zero = sampled([](double) { return Matrix::Zero(2, 2); }, 4);
  EXPECT_LT(max_abs(transport(zero, 100) - Matrix::Identity(2, 2)), 1e-15);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Matrix x = oracle::random_su2(rng, 2.0);
    const auto path = sampled([&](double) { return x; }, 10);
    const Matrix g = transport(path, 1000);
    EXPECT_LT(max_abs(g - oracle::su2_exp(x)), 1e-8);
    EXPECT_LT(unitary_residual(g), 1e-10);
  }
}

TEST(Transport, PiecewiseConstantIsExact) {
  std::mt19937_64 rng(2);
  const Matrix x1 = oracle::random_su2(rng, 2.0), x2 = oracle::random_su2(rng, 2.0);
  AlgebraPath p;
  p.interpolation = Interpolation::piecewise_constant;
  p.samples = {x1, x2, x2};
  const Matrix expect = oracle::su2_exp(0.5 * x2) * oracle::su2_exp(0.5 * x1);
  EXPECT_LT(max_abs(transport(p, 20) - expect), 1e-13);
}

TEST(Transport, SecondOrderConvergence) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix z = oracle::random_su2(rng, 2.0), x = oracle::random_su2(rng, 2.0);
    // g(t) = exp(tZ) exp(tX) has right-logarithmic derivative Z + Ad(exp tZ) X
    auto u = [&](double t) -> Matrix {
      const Matrix e = oracle::su2_exp(t * z);
      return z + e * x * e.adjoint();
    };
    const Matrix exact = oracle::su2_exp(z) * oracle::su2_exp(x);
    const double e1 = max_abs(transport_field(u, 2, 50) - exact);
    const double e2 = max_abs(transport_field(u, 2, 100) - exact);
    const double e3 = max_abs(transport_field(u, 2, 200) - exact);
    EXPECT_GT(e1 / e2, 3.8);
    EXPECT_GT(e2 / e3, 3.8);
    EXPECT_LT(e3, 1e-3);
  }
}

TEST(Transport, AgreesWithRk4Reference) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = oracle::SmoothSu2Field::random(rng, 3, 1.0);
    const Matrix ref = oracle::reference_transport(std::cref(f), 2, 4000);
    EXPECT_LT(max_abs(transport_field(std::cref(f), 2, 4000) - ref), 1e-6);
  }
}

TEST(Transport, RejectsBadInput) {
  AlgebraPath p;
  p.samples = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  EXPECT_THROW(transport(p, 10), ValidationError);
  const auto ok = sampled([](double) { return oracle::su2_element(1, 0, 0); }, 10);
  EXPECT_THROW(transport(ok, 5), ConfigError);
}

TEST(Gauge, IdentityAndPureGauge) {
  std::mt19937_64 rng(5);
  const Matrix x = oracle::random_su2(rng, 1.5);
  const auto u = sampled([&](double t) { return oracle::su2_element(std::sin(t), t, 0.3); }, 200);
  const auto e = sampled_gauge([](double) { return Matrix::Identity(2, 2); }, 200);
  const auto same = gauge_act(e, u);
  for (std::size_t k = 0; k < u.samples.size(); ++k) EXPECT_LT(max_abs(same.samples[k] - u.samples[k]), 1e-15);

  const auto zero = sampled([](double) { return Matrix::Zero(2, 2); }, 200);
  const auto g = sampled_gauge([&](double t) { return oracle::su2_exp(t * x); }, 200);
  const auto pure = gauge_act(g, zero);
  for (const auto& s : pure.samples) EXPECT_LT(max_abs(s - x), 1e-4);
}

TEST(Gauge, BasedLoopsPreserveTransport) {
  std::mt19937_64 rng(6);
  const int S = 16000;  // the sampled data is only second-order accurate
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix y1 = oracle::random_su2(rng, 2.0), y2 = oracle::random_su2(rng, 2.0);
    const auto f = oracle::SmoothSu2Field::random(rng, 2, 1.0);
    const auto u = sampled(std::cref(f), S);
    const auto loop = sampled_gauge(
        [&](double t) -> Matrix {
          return oracle::su2_exp(std::sin(std::numbers::pi * t) * y1) * oracle::su2_exp(std::sin(2 * std::numbers::pi * t) * y2);
        },
        S);
    EXPECT_LT(max_abs(transport(gauge_act(loop, u), 2 * S) - transport(u, 2 * S)), 1e-6);
  }
}

TEST(Gauge, BoundaryEquivariance) {
  std::mt19937_64 rng(7);
  const int S = 4000;
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix y = oracle::random_su2(rng, 2.0), z = oracle::random_su2(rng, 1.0);
    const auto f = oracle::SmoothSu2Field::random(rng, 2, 1.0);
    const auto u = sampled(std::cref(f), S);
    const auto g = sampled_gauge([&](double t) -> Matrix { return oracle::su2_exp(t * y) * oracle::su2_exp(t * t * z); }, S);
    const Matrix lhs = transport(gauge_act(g, u), 2 * S);
    const Matrix phi = transport(u, 2 * S);
    const Matrix defect = lhs * g.samples.front() * phi.adjoint() * g.samples.back().adjoint();
    EXPECT_LT(max_abs(defect - Matrix::Identity(2, 2)), 1e-6);
  }
}

TEST(Pullback, Examples) {
  std::mt19937_64 rng(8);
  const Matrix x = oracle::random_su2(rng, 1.0);
  const auto omega = sampled([&](double) { return x; }, 8);
  const auto mu = pullback_connection(omega);
  for (const auto& s : mu.samples) EXPECT_LT(max_abs(s + x), 1e-15);
  const auto rel = pullback_connection(omega, omega, 16);
  for (const auto& s : rel.samples) EXPECT_LT(max_abs(s), 1e-15);
  // linear in omega - omega0 at fixed reference
  const auto omega0 = sampled([&](double t) { return oracle::su2_element(t, 0.2, -0.1); }, 8);
  const auto a = sampled([&](double t) { return oracle::su2_element(0.3, t * t, 0.0); }, 8);
  const auto b = sampled([&](double t) { return oracle::su2_element(-0.1, 0.0, std::cos(t)); }, 8);
  AlgebraPath ab = omega0;
  for (std::size_t k = 0; k < ab.samples.size(); ++k) ab.samples[k] += 2.0 * a.samples[k] - 3.0 * b.samples[k];
  AlgebraPath oa = omega0, ob = omega0;
  for (std::size_t k = 0; k < oa.samples.size(); ++k) {
    oa.samples[k] += a.samples[k];
    ob.samples[k] += b.samples[k];
  }
  const auto mab = pullback_connection(ab, omega0, 16), ma = pullback_connection(oa, omega0, 16),
             mb = pullback_connection(ob, omega0, 16);
  for (std::size_t k = 0; k < mab.samples.size(); ++k)
    EXPECT_LT(max_abs(mab.samples[k] - 2.0 * ma.samples[k] + 3.0 * mb.samples[k]), 1e-14);
}

TEST(Holonomy, TrivialAndTransportOfPullback) {
  std::mt19937_64 rng(9);
  const auto f0 = oracle::SmoothSu2Field::random(rng, 2, 1.0);
  const auto omega0 = sampled(std::cref(f0), 40);
  EXPECT_LT(max_abs(holonomy_element(omega0, omega0, 800) - Matrix::Identity(2, 2)), 1e-14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = oracle::SmoothSu2Field::random(rng, 2, 1.0);
    const auto omega = sampled(std::cref(f), 40);
    const int steps = 4000;
    const Matrix hol = holonomy_element(omega, omega0, steps);
    const Matrix phi_mu = transport(pullback_connection(omega, omega0, steps, steps / 2), steps);
    EXPECT_LT(max_abs(hol - phi_mu), 1e-6);
  }
}

TEST(Holonomy, GaugeEquivariance) {
  std::mt19937_64 rng(10);
  const int S = 2000, steps = 2 * S;
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = oracle::SmoothSu2Field::random(rng, 2, 1.0);
    const auto f0 = oracle::SmoothSu2Field::random(rng, 2, 1.0);
    const Matrix y = oracle::random_su2(rng, 1.5);
    const auto omega = sampled(std::cref(f), S), omega0 = sampled(std::cref(f0), S);
    const auto gamma = sampled_gauge([&](double t) { return oracle::su2_exp(std::sin(3 * t) * y); }, S);
    const auto rho = lambda_c(gamma, omega0, steps);
    const Matrix lhs = holonomy_element(gauge_connection(gamma, omega), omega0, steps);
    const Matrix rhs = rho.samples.back() * holonomy_element(omega, omega0, steps) * rho.samples.front().adjoint();
    EXPECT_LT(max_abs(lhs - rhs), 1e-6);
  }
}

TEST(Hyperpolar, Su2AndSu3) {
  const auto a = section_orthogonality_check("SU2", "u1diag", "u1diag", 50, 1);
  EXPECT_TRUE(a.passed);
  EXPECT_LT(a.max_residual, 1e-10);
  EXPECT_EQ(a.max_abelian, 0.0);
  EXPECT_EQ(a.dimension_sum, 3);
  const auto b = section_orthogonality_check("SU3", "so3", "so3", 50, 2);
  EXPECT_TRUE(b.passed);
  EXPECT_LT(b.max_residual, 1e-8);
  EXPECT_EQ(b.max_abelian, 0.0);
  EXPECT_EQ(b.dimension_sum, 8);
  EXPECT_THROW(section_orthogonality_check("SU2", "bogus", "u1diag", 5, 1), ValidationError);
}
