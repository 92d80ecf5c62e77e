#include "focalis/geomodel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "focalis/errors.hpp"

namespace focalis::geomodel {
namespace {

double shape_curvature(const SphereProductConfig& cfg, int j) {
  const double rp = cfg.rprime[j], r = cfg.blocks[j].r;
  return std::sqrt(1.0 / (rp * rp) - 1.0 / (r * r));
}

void require_size(const SphereProductConfig& cfg, const Eigen::VectorXd& v, const char* what) {
  if (v.size() != cfg.N) throw ValidationError(std::string(what) + " has wrong ambient dimension");
}

}  // namespace

SphereProductConfig SphereProductConfig::defaults() {
  SphereProductConfig cfg;
  cfg.blocks = {{4, 1.0}, {5, 0.8}, {6, 0.6}, {7, 0.5}};
  cfg.k1 = 3;
  cfg.rprime = {0.6, 0.5, 0.45};
  cfg.k2 = 2;
  cfg.N = 64;
  return cfg;
}

void SphereProductConfig::validate() const {
  if (blocks.empty()) throw ValidationError("config needs at least one block");
  for (const auto& b : blocks) {
    if (b.m < 2) throw ValidationError("block dimension m must be >= 2");
    if (!(b.r > 0.0) || !std::isfinite(b.r)) throw ValidationError("block radius must be > 0");
  }
  if (k1 < 0 || k1 > static_cast<int>(blocks.size())) throw ValidationError("k1 must lie in [0, K]");
  if (static_cast<int>(rprime.size()) != k1) throw ValidationError("rprime must have k1 entries");
  for (int j = 0; j < k1; ++j) {
    if (!(rprime[j] > 0.0 && rprime[j] < blocks[j].r)) {
      throw ValidationError("infeasible config: need 0 < r'_j < r_j for block " + std::to_string(j + 1));
    }
  }
  if (k2 < 0) throw ValidationError("k2 must be >= 0");
  if (N < block_dim() + k2) throw ValidationError("ambient dimension N too small for blocks and k2");
}

int SphereProductConfig::block_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.m;
  return n;
}

int SphereProductConfig::block_offset(int k) const {
  int n = 0;
  for (int i = 0; i < k; ++i) n += blocks[i].m;
  return n;
}

double SphereProductConfig::frozen_height(int j) const {
  const double r = blocks[j].r, rp = rprime[j];
  return std::sqrt(r * r - rp * rp);
}

int SphereProductConfig::tangent_dim() const { return N - static_cast<int>(blocks.size()) - k1 - k2; }

ModelSubmanifold::ModelSubmanifold(SphereProductConfig config, std::vector<Eigen::VectorXd> points)
    : config_(std::move(config)), points_(std::move(points)) {
  config_.validate();
  for (const auto& p : points_) require_size(config_, p, "sample point");
}

Eigen::MatrixXd ModelSubmanifold::constraint_gradients(std::size_t i) const {
  const auto& cfg = config_;
  const auto& x = point(i);
  const int K = static_cast<int>(cfg.blocks.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(cfg.N, K + cfg.k1 + cfg.k2);
  for (int k = 0; k < K; ++k) {
    const int off = cfg.block_offset(k), m = cfg.blocks[k].m;
    g.col(k).segment(off, m) = 2.0 * x.segment(off, m);
  }
  for (int j = 0; j < cfg.k1; ++j) g(cfg.block_offset(j) + cfg.blocks[j].m - 1, K + j) = 1.0;
  for (int j = 0; j < cfg.k2; ++j) g(cfg.odd_offset() + j, K + cfg.k1 + j) = 1.0;
  return g;
}

Eigen::MatrixXd ModelSubmanifold::tangent_basis(std::size_t i) const {
  const Eigen::MatrixXd g = constraint_gradients(i);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(config_.N, config_.N);
  return q.rightCols(config_.N - g.cols());
}

Eigen::VectorXd ModelSubmanifold::block_normal(std::size_t i, int j) const {
  const auto& cfg = config_;
  const int off = cfg.block_offset(j), m = cfg.blocks[j].m;
  const double r = cfg.blocks[j].r;
  const auto a = point(i).segment(off, m);
  Eigen::VectorXd n = Eigen::VectorXd::Zero(cfg.N);
  n.segment(off, m) = -(a(m - 1) / (r * r)) * a;
  n(off + m - 1) += 1.0;
  return n / n.norm();
}

Eigen::MatrixXd ModelSubmanifold::normal_basis(std::size_t i) const {
  Eigen::MatrixXd nb = Eigen::MatrixXd::Zero(config_.N, config_.normal_dim());
  for (int j = 0; j < config_.k1; ++j) nb.col(j) = block_normal(i, j);
  for (int j = 0; j < config_.k2; ++j) nb(config_.odd_offset() + j, config_.k1 + j) = 1.0;
  return nb;
}

Eigen::VectorXd ModelSubmanifold::normal_vector(std::size_t i, const NormalField& field) const {
  if (static_cast<int>(field.block_coeffs.size()) != config_.k1 || static_cast<int>(field.odd.size()) != config_.k2) {
    throw ValidationError("normal field needs k1 block coefficients and k2 odd components");
  }
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(config_.N);
  for (int j = 0; j < config_.k1; ++j) xi += field.block_coeffs[j] * block_normal(i, j);
  for (int j = 0; j < config_.k2; ++j) xi(config_.odd_offset() + j) = field.odd[j];
  return xi;
}

NormalField ModelSubmanifold::decompose(std::size_t i, const Eigen::VectorXd& xi, double tol) const {
  require_size(config_, xi, "normal vector");
  NormalField f;
  for (int j = 0; j < config_.k1; ++j) f.block_coeffs.push_back(block_normal(i, j).dot(xi));
  for (int j = 0; j < config_.k2; ++j) f.odd.push_back(xi(config_.odd_offset() + j));
  const double residual = (normal_vector(i, f) - xi).norm();
  if (residual > tol * std::max(1.0, xi.norm())) {
    throw ValidationError("vector is not normal to the model at this point (residual " + std::to_string(residual) +
                          ")");
  }
  return f;
}

double ModelSubmanifold::constraint_residual(std::size_t i) const {
  const auto& cfg = config_;
  const auto& x = point(i);
  double worst = 0.0;
  for (std::size_t k = 0; k < cfg.blocks.size(); ++k) {
    const double r = cfg.blocks[k].r;
    const double n2 = x.segment(cfg.block_offset(static_cast<int>(k)), cfg.blocks[k].m).squaredNorm();
    worst = std::max(worst, std::abs(n2 - r * r));
  }
  for (int j = 0; j < cfg.k1; ++j) {
    worst = std::max(worst, std::abs(x(cfg.block_offset(j) + cfg.blocks[j].m - 1) - cfg.frozen_height(j)));
  }
  for (int j = 0; j < cfg.k2; ++j) worst = std::max(worst, std::abs(x(cfg.odd_offset() + j)));
  return worst;
}

std::vector<int> ModelSubmanifold::block_eigenspace_dims(std::size_t i) const {
  const Eigen::MatrixXd t = tangent_basis(i);
  std::vector<int> dims;
  for (int j = 0; j < config_.k1; ++j) {
    const Eigen::MatrixXd rows = t.middleRows(config_.block_offset(j), config_.blocks[j].m);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    const auto& s = svd.singularValues();
    dims.push_back(static_cast<int>((s.array() > 1.0 - 1e-8).count()));
  }
  return dims;
}

ModelSubmanifold build_model(const SphereProductConfig& config, int n_points, std::uint64_t seed) {
  config.validate();
  if (n_points < 1) throw ValidationError("need at least one sample point");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> points;
  for (int p = 0; p < n_points; ++p) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(config.N);
    for (std::size_t k = 0; k < config.blocks.size(); ++k) {
      const int kk = static_cast<int>(k);
      const int off = config.block_offset(kk), m = config.blocks[k].m;
      const bool frozen = kk < config.k1;
      const int free = frozen ? m - 1 : m;
      Eigen::VectorXd y(free);
      do {
        for (int c = 0; c < free; ++c) y(c) = normal(rng);
      } while (y.norm() < 1e-8);
      const double radius = frozen ? config.rprime[kk] : config.blocks[k].r;
      x.segment(off, free) = radius * y / y.norm();
      if (frozen) x(off + m - 1) = config.frozen_height(kk);
    }
    for (int c = config.odd_offset() + config.k2; c < config.N; ++c) x(c) = 0.3 * normal(rng);
    points.push_back(std::move(x));
  }
  return ModelSubmanifold(config, std::move(points));
}

Eigen::VectorXd ambient_curvature(const SphereProductConfig& config, const Eigen::VectorXd& w,
                                  const Eigen::VectorXd& v) {
  require_size(config, w, "w");
  require_size(config, v, "v");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(config.N);
  for (std::size_t k = 0; k < config.blocks.size(); ++k) {
    const int off = config.block_offset(static_cast<int>(k)), m = config.blocks[k].m;
    const double r2 = config.blocks[k].r * config.blocks[k].r;
    const auto wk = w.segment(off, m);
    const auto vk = v.segment(off, m);
    out.segment(off, m) = (vk.squaredNorm() * wk - wk.dot(vk) * vk) / r2;
  }
  return out;
}

spectral::SpectralData BlockOperator::spectrum() const {
  std::vector<double> values;
  std::vector<int> mults;
  for (const auto& b : blocks) {
    if (b.mult > 0) {
      values.push_back(b.value);
      mults.push_back(b.mult);
    }
  }
  return spectral::SpectralData::finite(values, mults);
}

namespace {

BlockOperator block_operator(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi,
                             double (*value)(const SphereProductConfig&, int, double)) {
  const auto& cfg = model.config();
  const NormalField f = model.decompose(i, xi);
  const auto dims = model.block_eigenspace_dims(i);
  BlockOperator op;
  int used = 0;
  for (int j = 0; j < cfg.k1; ++j) {
    op.blocks.push_back({j + 1, value(cfg, j, f.block_coeffs[j]), dims[j]});
    used += dims[j];
  }
  op.blocks.insert(op.blocks.begin(), {0, 0.0, cfg.tangent_dim() - used});
  return op;
}

}  // namespace

BlockOperator normal_jacobi_operator(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi) {
  return block_operator(model, i, xi, [](const SphereProductConfig& cfg, int j, double c) {
    const double r = cfg.blocks[j].r;
    return c * c / (r * r);
  });
}

BlockOperator shape_operator(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi) {
  return block_operator(model, i, xi,
                        [](const SphereProductConfig& cfg, int j, double c) { return c * shape_curvature(cfg, j); });
}

focal::EigenGrid eigen_grid_of(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi) {
  const auto R = normal_jacobi_operator(model, i, xi);
  const auto A = shape_operator(model, i, xi);
  std::vector<focal::EigenPair> pairs;
  for (std::size_t b = 0; b < R.blocks.size(); ++b) {
    if (R.blocks[b].mult > 0) pairs.push_back({R.blocks[b].value, A.blocks[b].value, R.blocks[b].mult});
  }
  return focal::EigenGrid(std::move(pairs), "x" + std::to_string(i));
}

TraceClosedForm shape_trace_closed_form(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi) {
  const auto& cfg = model.config();
  const NormalField f = model.decompose(i, xi);
  const auto dims = model.block_eigenspace_dims(i);
  TraceClosedForm out;
  for (int j = 0; j < cfg.k1; ++j) {
    const double kappa = shape_curvature(cfg, j);
    out.from_block_dims += kappa * f.block_coeffs[j] * dims[j];
    out.with_printed_factor += kappa * std::abs(f.block_coeffs[j]) * (cfg.blocks[j].m - 1);
    if (dims[j] != cfg.blocks[j].m - 1) out.mismatch = true;
  }
  return out;
}

Eigen::MatrixXd shape_operator_matrix(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi,
                                      const Eigen::MatrixXd& tangent) {
  const auto& cfg = model.config();
  model.decompose(i, xi);
  const Eigen::MatrixXd g = model.constraint_gradients(i);
  const Eigen::VectorXd mu = g.colPivHouseholderQr().solve(xi);
  const double residual = (g * mu - xi).norm();
  if (residual > Tolerances{}.normal_residual * std::max(1.0, xi.norm())) {
    throw ValidationError("normal vector is not in the span of the constraint gradients");
  }
  const int d = static_cast<int>(tangent.cols());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < cfg.blocks.size(); ++k) {
    const int kk = static_cast<int>(k);
    const auto tk = tangent.middleRows(cfg.block_offset(kk), cfg.blocks[k].m);
    // Hess(|a_k|^2 - r_k^2) = 2 * (projector onto block k)
    a.noalias() -= 2.0 * mu(kk) * tk.transpose() * tk;
  }
  return a;
}

Eigen::MatrixXd normal_jacobi_matrix(const ModelSubmanifold& model, std::size_t i, const Eigen::VectorXd& xi,
                                     const Eigen::MatrixXd& tangent) {
  const auto& cfg = model.config();
  model.decompose(i, xi);
  const int d = static_cast<int>(tangent.cols());
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < cfg.blocks.size(); ++k) {
    const int off = cfg.block_offset(static_cast<int>(k)), m = cfg.blocks[k].m;
    const double r2 = cfg.blocks[k].r * cfg.blocks[k].r;
    const auto tk = tangent.middleRows(off, m);
    const auto xk = xi.segment(off, m);
    const Eigen::VectorXd proj = tk.transpose() * xk;
    r.noalias() += (xk.squaredNorm() / r2) * tk.transpose() * tk;
    r.noalias() -= (1.0 / r2) * proj * proj.transpose();
  }
  return r;
}

NormalField random_normal_field(const SphereProductConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(0.2, 1.2), odd(-1.0, 1.0);
  NormalField f;
  for (int j = 0; j < config.k1; ++j) f.block_coeffs.push_back(coeff(rng));
  for (int j = 0; j < config.k2; ++j) f.odd.push_back(odd(rng));
  return f;
}

CommutatorReport curvature_adapted_check(const ModelSubmanifold& model, int n_trials, std::uint64_t seed, double tol,
                                         const MatrixPerturbation& perturb) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, model.size() - 1);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  CommutatorReport report;
  for (int t = 0; t < n_trials; ++t) {
    const std::size_t i = pick(rng);
    NormalField f;
    for (int j = 0; j < model.config().k1; ++j) f.block_coeffs.push_back(coeff(rng));
    for (int j = 0; j < model.config().k2; ++j) f.odd.push_back(coeff(rng));
    const Eigen::VectorXd xi = model.normal_vector(i, f);
    const Eigen::MatrixXd tb = model.tangent_basis(i);
    Eigen::MatrixXd a = shape_operator_matrix(model, i, xi, tb);
    if (perturb) perturb(a);
    const Eigen::MatrixXd r = normal_jacobi_matrix(model, i, xi, tb);
    report.max_commutator = std::max(report.max_commutator, (a * r - r * a).norm());
    ++report.trials;
  }
  report.passed = report.max_commutator < tol;
  return report;
}

Example41Report verify_example41(const ModelSubmanifold& model, const NormalField& field,
                                 const std::vector<double>& radii, const focal::Window& window,
                                 const Tolerances& tol) {
  const auto& cfg = model.config();
  Example41Report rep;
  rep.field = field;
  rep.radii = radii;
  rep.block_dims = model.block_eigenspace_dims(0);
  for (int j = 0; j < cfg.k1; ++j) {
    rep.printed_dims.push_back(cfg.blocks[j].m - 1);
    if (rep.block_dims[j] != rep.printed_dims[j]) rep.multiplicity_mismatch = true;
  }
  std::vector<focal::EigenGrid> grids;
  for (std::size_t i = 0; i < model.size(); ++i) {
    PointReport pr;
    pr.index = i;
    pr.constraint_residual = model.constraint_residual(i);
    const Eigen::VectorXd xi = model.normal_vector(i, field);
    const Eigen::MatrixXd tb = model.tangent_basis(i);
    const Eigen::MatrixXd a = shape_operator_matrix(model, i, xi, tb);
    const Eigen::MatrixXd r = normal_jacobi_matrix(model, i, xi, tb);
    pr.commutator = (a * r - r * a).norm();
    pr.tr_shape_dense = a.trace();
    const auto closed = shape_trace_closed_form(model, i, xi);
    pr.tr_shape = closed.from_block_dims;
    pr.tr_shape_printed = closed.with_printed_factor;
    grids.push_back(eigen_grid_of(model, i, xi));
    for (double rad : radii) {
      pr.mean_curvature.push_back(focal::parallel_reg_mean_curvature(grids.back(), rad, tol.focal_proximity));
    }
    pr.focal = focal::focal_set(grids.back(), window, tol.radius_merge);
    rep.max_commutator = std::max(rep.max_commutator, pr.commutator);
    rep.max_constraint_residual = std::max(rep.max_constraint_residual, pr.constraint_residual);
    rep.points.push_back(std::move(pr));
  }
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& pr : rep.points) {
      if (!pr.mean_curvature[k]) continue;
      const double h = *pr.mean_curvature[k];
      lo = first ? h : std::min(lo, h);
      hi = first ? h : std::max(hi, h);
      first = false;
    }
    rep.max_mean_curvature_spread = std::max(rep.max_mean_curvature_spread, hi - lo);
  }
  const focal::MultisetTolerance mt{tol.spectrum_abs, tol.spectrum_rel};
  rep.weakly_isoparametric = focal::weakly_isoparametric_check(grids, mt).passed;
  rep.isoparametric = focal::isoparametric_check(grids, radii, tol.mean_curvature, tol.focal_proximity).passed;
  rep.equifocal = focal::equifocal_check(grids, window, mt, tol.radius_merge).passed;
  rep.passed = rep.max_commutator < tol.commutator && rep.max_constraint_residual < tol.constraint &&
               rep.weakly_isoparametric && rep.isoparametric && rep.equifocal;
  return rep;
}

}  // namespace focalis::geomodel
