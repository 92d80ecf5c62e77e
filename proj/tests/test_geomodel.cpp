#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "focalis/errors.hpp"
#include "focalis/geomodel.hpp"
#include "support/oracles.hpp"

using namespace focalis;
using namespace focalis::geomodel;

namespace {

SphereProductConfig two_block() {
  SphereProductConfig c;
  c.blocks = {{4, 1.0}, {5, 0.7}};
  c.k1 = 2;
  c.rprime = {0.6, 0.5};
  c.k2 = 1;
  c.N = 20;
  return c;
}

SphereProductConfig single_block() {
  SphereProductConfig c;
  c.blocks = {{3, 1.0}};
  c.k1 = 1;
  c.rprime = {1.0 / std::sqrt(2.0)};
  c.k2 = 0;
  c.N = 3;
  return c;
}

Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

Eigen::VectorXd block_spectrum(const BlockOperator& op) {
  std::vector<double> v;
  for (const auto& b : op.blocks)
    for (int k = 0; k < b.mult; ++k) v.push_back(b.value);
  return sorted(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (m + m.transpose())).eigenvalues();
}

}  // namespace

TEST(Config, DefaultsAndValidation) {
  const auto d = SphereProductConfig::defaults();
  EXPECT_EQ(d.blocks.size(), 4u);
  EXPECT_EQ(d.N, 64);
  EXPECT_NO_THROW(d.validate());
  auto bad = d;
  bad.rprime[0] = bad.blocks[0].r;
  EXPECT_THROW(bad.validate(), ValidationError);
  EXPECT_THROW(build_model(bad, 3, 1), ValidationError);
  bad = d;
  bad.N = 10;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(BuildModel, ConstraintsAndSingleBlockCircle) {
  const auto model = build_model(SphereProductConfig::defaults(), 50, 3);
  for (std::size_t i = 0; i < model.size(); ++i) EXPECT_LT(model.constraint_residual(i), 1e-12);

  const auto circle = build_model(single_block(), 20, 5);
  for (std::size_t i = 0; i < circle.size(); ++i) {
    const auto& x = circle.point(i);
    EXPECT_NEAR(x.head(2).norm(), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(x(2), 1.0 / std::sqrt(2.0), 1e-14);
  }
}

TEST(BuildModel, DeterministicForSeed) {
  const auto a = build_model(SphereProductConfig::defaults(), 5, 42);
  const auto b = build_model(SphereProductConfig::defaults(), 5, 42);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.point(i), b.point(i));
}

TEST(BuildModel, FramesSpanAmbientSpace) {
  const auto cfg = SphereProductConfig::defaults();
  const auto model = build_model(cfg, 10, 8);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto t = model.tangent_basis(i);
    const auto n = model.normal_basis(i);
    EXPECT_EQ(t.cols(), cfg.tangent_dim());
    EXPECT_EQ(n.cols(), cfg.normal_dim());
    Eigen::MatrixXd all(cfg.N, cfg.N);
    all << t, n, Eigen::MatrixXd::Zero(cfg.N, static_cast<Eigen::Index>(cfg.blocks.size()));
    for (int k = 0; k < static_cast<int>(cfg.blocks.size()); ++k) {
      all.block(cfg.block_offset(k), t.cols() + n.cols() + k, cfg.blocks[k].m, 1) =
          model.point(i).segment(cfg.block_offset(k), cfg.blocks[k].m) / cfg.blocks[k].r;
    }
    // projectors onto T and onto the normal space are complementary inside T(S x ... x S)
    EXPECT_LT((all.transpose() * all - Eigen::MatrixXd::Identity(cfg.N, cfg.N)).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(all);
    EXPECT_EQ(lu.rank(), cfg.N);
  }
}

TEST(AmbientCurvature, ConstantCurvatureIdentities) {
  const auto cfg = two_block();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(cfg.N), w = Eigen::VectorXd::Zero(cfg.N);
  v(4) = 1.0;
  EXPECT_LT(ambient_curvature(cfg, v, v).norm(), 1e-15);
  w(6) = 1.0;
  const Eigen::VectorXd r = ambient_curvature(cfg, w, v);
  EXPECT_NEAR(r(6), 1.0 / (0.7 * 0.7), 1e-14);
  EXPECT_NEAR(r.norm(), 1.0 / (0.7 * 0.7), 1e-14);
  Eigen::VectorXd odd = Eigen::VectorXd::Zero(cfg.N);
  odd(15) = 1.0;
  EXPECT_LT(ambient_curvature(cfg, odd, v).norm(), 1e-15);
}

TEST(AmbientCurvature, MatchesFiniteDifferenceRiemannTensor) {
  SphereProductConfig cfg;
  cfg.blocks = {{3, 1.3}, {3, 0.6}};
  cfg.N = 8;
  oracle::SpherePairChart chart{1.3, 0.6};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ut(0.5, 2.6), up(-3.0, 3.0), uv(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Vector4d q(ut(rng), up(rng), ut(rng), up(rng));
    const Eigen::Vector4d wq(uv(rng), uv(rng), uv(rng), uv(rng)), vq(uv(rng), uv(rng), uv(rng), uv(rng));
    const auto j = chart.jacobian(q);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(8), v = Eigen::VectorXd::Zero(8);
    w.head(6) = j * wq;
    v.head(6) = j * vq;
    w(7) = uv(rng);  // flat directions carry no curvature
    v(6) = uv(rng);
    const Eigen::VectorXd ref = chart.curvature(q, wq, vq);
    const Eigen::VectorXd got = ambient_curvature(cfg, w, v);
    EXPECT_LT((got.head(6) - ref).norm(), 1e-4) << "trial " << trial;
    EXPECT_EQ(got.tail(2).norm(), 0.0);
  }
}

TEST(ShapeOperator, MatchesSecondFundamentalForm) {
  for (const auto& cfg : {two_block(), SphereProductConfig::defaults()}) {
    const auto model = build_model(cfg, 4, 12);
    std::mt19937_64 rng(6);
    for (std::size_t i = 0; i < model.size(); ++i) {
      const auto field = random_normal_field(cfg, 100 + i);
      const Eigen::VectorXd xi = model.normal_vector(i, field);
      const Eigen::MatrixXd t = model.tangent_basis(i);
      const Eigen::MatrixXd fd = oracle::second_fundamental_form(cfg, model.point(i), xi, t);
      const Eigen::MatrixXd dense = shape_operator_matrix(model, i, xi, t);
      EXPECT_LT((fd - dense).cwiseAbs().maxCoeff(), 1e-6);
      const auto closed = block_spectrum(shape_operator(model, i, xi));
      EXPECT_LT((sym_eigenvalues(fd) - closed).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(ShapeOperator, UnitExampleAndGreatSphereLimit) {
  const auto model = build_model(single_block(), 3, 2);
  const Eigen::VectorXd xi = model.block_normal(0, 0);
  const auto op = shape_operator(model, 0, xi);
  const auto spec = block_spectrum(op);
  ASSERT_EQ(spec.size(), 1);
  EXPECT_NEAR(std::abs(spec(0)), 1.0, 1e-14);
  const auto t = model.tangent_basis(0);
  EXPECT_NEAR(std::abs(sym_eigenvalues(oracle::second_fundamental_form(single_block(), model.point(0), xi, t))(0)),
              1.0, 1e-8);

  double previous = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto cfg = single_block();
    cfg.rprime = {1.0 - eps};
    const auto m = build_model(cfg, 1, 2);
    const double value = std::abs(block_spectrum(shape_operator(m, 0, m.block_normal(0, 0)))(0));
    EXPECT_LT(value, previous);
    previous = value;
  }
  EXPECT_LT(previous, 0.02);
}

TEST(NormalJacobi, MatchesDenseCurvature) {
  const auto cfg = SphereProductConfig::defaults();
  const auto model = build_model(cfg, 5, 21);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Eigen::VectorXd xi = model.normal_vector(i, random_normal_field(cfg, i));
    const Eigen::MatrixXd t = model.tangent_basis(i);
    const Eigen::MatrixXd ref = oracle::jacobi_matrix_from_curvature(cfg, xi, t);
    EXPECT_LT((normal_jacobi_matrix(model, i, xi, t) - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((sym_eigenvalues(ref) - block_spectrum(normal_jacobi_operator(model, i, xi))).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(NormalJacobi, OddNormalGivesZeroOperator) {
  const auto cfg = two_block();
  const auto model = build_model(cfg, 2, 3);
  NormalField f{{0.0, 0.0}, {1.0}};
  const Eigen::VectorXd xi = model.normal_vector(0, f);
  for (const auto& b : normal_jacobi_operator(model, 0, xi).blocks) EXPECT_EQ(b.value, 0.0);
  const auto grid = eigen_grid_of(model, 0, xi);
  ASSERT_EQ(grid.pairs().size(), 1u);
  EXPECT_EQ(grid.pairs()[0].lambdaR, 0.0);
  EXPECT_EQ(grid.pairs()[0].lambdaA, 0.0);
  EXPECT_EQ(grid.pairs()[0].mult, cfg.tangent_dim());
}

TEST(NormalJacobi, RejectsNonNormalVector) {
  const auto model = build_model(two_block(), 1, 3);
  const Eigen::VectorXd t = model.tangent_basis(0).col(0);
  EXPECT_THROW(normal_jacobi_operator(model, 0, t), ValidationError);
  EXPECT_THROW(shape_operator(model, 0, t), ValidationError);
}

TEST(EigenGrid, PartitionsTangentSpace) {
  const auto cfg = SphereProductConfig::defaults();
  const auto model = build_model(cfg, 5, 1);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto grid = eigen_grid_of(model, i, model.normal_vector(i, random_normal_field(cfg, 9)));
    EXPECT_EQ(grid.total_multiplicity(), cfg.tangent_dim());
  }
  const auto single = build_model(single_block(), 1, 1);
  const auto g = eigen_grid_of(single, 0, single.block_normal(0, 0));
  ASSERT_EQ(g.pairs().size(), 1u);
  EXPECT_NEAR(g.pairs()[0].lambdaR, 1.0, 1e-14);
  EXPECT_NEAR(std::abs(g.pairs()[0].lambdaA), 1.0, 1e-14);
}

TEST(BlockDims, RankComputationAndPrintedFactor) {
  const auto cfg = SphereProductConfig::defaults();
  const auto model = build_model(cfg, 3, 4);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto dims = model.block_eigenspace_dims(i);
    ASSERT_EQ(static_cast<int>(dims.size()), cfg.k1);
    for (int j = 0; j < cfg.k1; ++j) EXPECT_EQ(dims[j], cfg.blocks[j].m - 2);
  }
  const Eigen::VectorXd xi = model.normal_vector(0, random_normal_field(cfg, 2));
  const auto tr = shape_trace_closed_form(model, 0, xi);
  EXPECT_TRUE(tr.mismatch);
  const auto spec = shape_operator(model, 0, xi).spectrum();
  EXPECT_NEAR(tr.from_block_dims, *spectral::reg_trace(spec).value, 1e-13);
  EXPECT_NEAR(tr.from_block_dims, shape_operator_matrix(model, 0, xi, model.tangent_basis(0)).trace(), 1e-12);
}

TEST(CurvatureAdapted, CommutatorsVanish) {
  const auto model = build_model(SphereProductConfig::defaults(), 20, 5);
  const auto rep = curvature_adapted_check(model, 100, 77);
  EXPECT_TRUE(rep.passed);
  EXPECT_LT(rep.max_commutator, 1e-10);
  const auto single = build_model(single_block(), 5, 5);
  EXPECT_TRUE(curvature_adapted_check(single, 10, 1).passed);
}

TEST(CurvatureAdapted, NegativeControl) {
  const auto model = build_model(SphereProductConfig::defaults(), 5, 5);
  const auto rep = curvature_adapted_check(model, 10, 7, 1e-9, [](Eigen::MatrixXd& a) {
    a(0, a.cols() - 1) += 0.1;
    a(a.cols() - 1, 0) += 0.1;
  });
  EXPECT_FALSE(rep.passed);
  EXPECT_GT(rep.max_commutator, 1e-3);
}

TEST(FocalRadii, MatchDenseJacobiSystem) {
  const auto cfg = two_block();
  const auto model = build_model(cfg, 3, 19);
  const focal::Window window{0.05, 5.0};
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Eigen::VectorXd xi = model.normal_vector(i, random_normal_field(cfg, 40 + i));
    const Eigen::MatrixXd t = model.tangent_basis(i);
    // operators from the finite-difference second fundamental form and the written-out curvature
    const Eigen::MatrixXd a = oracle::second_fundamental_form(cfg, model.point(i), xi, t);
    const Eigen::MatrixXd r = oracle::jacobi_matrix_from_curvature(cfg, xi, t);
    const auto dense = oracle::dense_focal_radii(a, r, window.lo, window.hi);
    const auto set = focal::focal_set(eigen_grid_of(model, i, xi), window);
    ASSERT_EQ(dense.size(), set.entries.size());
    for (std::size_t k = 0; k < dense.size(); ++k) {
      EXPECT_NEAR(dense[k].radius, set.entries[k].radius, 1e-6);
      EXPECT_EQ(dense[k].mult, set.entries[k].mult);
    }
  }
}

TEST(Isoparametric, ConstantAcrossPoints) {
  const auto cfg = SphereProductConfig::defaults();
  const auto model = build_model(cfg, 100, 7);
  const auto field = random_normal_field(cfg, 8);
  const std::vector<double> radii{0.05, 0.1, 0.2};
  const auto rep = verify_example41(model, field, radii, focal::Window{0.01, 5.0});
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(rep.weakly_isoparametric);
  EXPECT_TRUE(rep.isoparametric);
  EXPECT_TRUE(rep.equifocal);
  EXPECT_LT(rep.max_commutator, 1e-10);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double h0 = *rep.points[0].mean_curvature[k];
    for (const auto& p : rep.points) EXPECT_NEAR(*p.mean_curvature[k], h0, 64 * 2.2e-16 * std::abs(h0));
  }
}

TEST(Isoparametric, SpectraIndependentOfPoint) {
  const auto cfg = two_block();
  const auto model = build_model(cfg, 30, 13);
  const auto field = random_normal_field(cfg, 14);
  const auto ref_a = block_spectrum(shape_operator(model, 0, model.normal_vector(0, field)));
  const auto ref_r = block_spectrum(normal_jacobi_operator(model, 0, model.normal_vector(0, field)));
  for (std::size_t i = 1; i < model.size(); ++i) {
    const Eigen::VectorXd xi = model.normal_vector(i, field);
    EXPECT_LT((block_spectrum(shape_operator(model, i, xi)) - ref_a).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((block_spectrum(normal_jacobi_operator(model, i, xi)) - ref_r).cwiseAbs().maxCoeff(), 1e-14);
  }
}
