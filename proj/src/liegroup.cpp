#include "focalis/liegroup.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "focalis/errors.hpp"

namespace focalis::liegroup {
namespace {

using cd = std::complex<double>;
constexpr cd I_(0.0, 1.0);

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

Matrix bracket(const Matrix& x, const Matrix& y) { return x * y - y * x; }

int epsilon(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

std::vector<Matrix> su2_basis() {
  Matrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -I_, I_, 0;
  s3 << 1, 0, 0, -1;
  return {0.5 * I_ * s1, 0.5 * I_ * s2, 0.5 * I_ * s3};
}

std::vector<Matrix> so3_basis() {
  std::vector<Matrix> out;
  for (int k = 0; k < 3; ++k) {
    Matrix l = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) l(i, j) = -static_cast<double>(epsilon(k, i, j));
    out.push_back(l);
  }
  return out;
}

std::vector<Matrix> su3_basis() {
  std::vector<Matrix> l(8, Matrix::Zero(3, 3));
  l[0](0, 1) = l[0](1, 0) = 1;
  l[1](0, 1) = -I_;
  l[1](1, 0) = I_;
  l[2](0, 0) = 1;
  l[2](1, 1) = -1;
  l[3](0, 2) = l[3](2, 0) = 1;
  l[4](0, 2) = -I_;
  l[4](2, 0) = I_;
  l[5](1, 2) = l[5](2, 1) = 1;
  l[6](1, 2) = -I_;
  l[6](2, 1) = I_;
  l[7](0, 0) = l[7](1, 1) = 1.0 / std::sqrt(3.0);
  l[7](2, 2) = -2.0 / std::sqrt(3.0);
  for (auto& m : l) m = 0.5 * I_ * m;
  return l;
}

std::vector<Matrix> son_basis(int n) {
  std::vector<Matrix> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1;
      e(j, i) = -1;
      out.push_back(e);
    }
  return out;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Orthonormal basis of the null space of m (columns), by SVD.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol) {
  const int n = static_cast<int>(m.cols());
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * scale) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return m;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10) ++rank;
  return svd.matrixU().leftCols(rank);
}

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++rank;
  return rank;
}

// Helpers expressing algebra operations in (-B)-orthonormal frame coordinates.
class Frame {
 public:
  explicit Frame(const LieAlgebraBasis& alg)
      : alg_(alg), F_(alg.orthonormal_frame()), Finv_(F_.transpose() * alg.inner_product()) {
    for (int i = 0; i < alg.dim(); ++i) ad_.push_back(Finv_ * alg.ad(F_.col(i)) * F_);
  }
  Matrix element(const Eigen::VectorXd& y) const { return alg_.element(F_ * y); }
  Eigen::VectorXd coords(const Matrix& x) const { return Finv_ * alg_.coords(x); }
  Eigen::MatrixXd ad(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(alg_.dim(), alg_.dim());
    for (int i = 0; i < alg_.dim(); ++i) out += y(i) * ad_[i];
    return out;
  }
  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const { return ad(x) * y; }
  /// Matrix of an involution in frame coordinates.
  Eigen::MatrixXd matrix_of(const Involution& theta) const {
    const int n = alg_.dim();
    Eigen::MatrixXd t(n, n);
    for (int i = 0; i < n; ++i) t.col(i) = coords(theta.apply(element(Eigen::VectorXd::Unit(n, i))));
    return t;
  }

 private:
  const LieAlgebraBasis& alg_;
  Eigen::MatrixXd F_;
  Eigen::MatrixXd Finv_;
  std::vector<Eigen::MatrixXd> ad_;
};

// Max residual of theta being an involutive automorphism of the algebra.
double involution_defect(const LieAlgebraBasis& alg, const Frame& frame, const Involution& theta) {
  const int n = alg.dim();
  double worst = 0.0;
  const Eigen::MatrixXd t = frame.matrix_of(theta);
  for (int i = 0; i < n; ++i) {
    const Matrix ei = frame.element(Eigen::VectorXd::Unit(n, i));
    const Matrix ti = theta.apply(ei);
    worst = std::max(worst, alg.membership_residual(ti));
    worst = std::max(worst, max_abs(theta.apply(ti) - ei));
    for (int j = i + 1; j < n; ++j) {
      const Matrix ej = frame.element(Eigen::VectorXd::Unit(n, j));
      worst = std::max(worst, max_abs(theta.apply(bracket(ei, ej)) - bracket(ti, theta.apply(ej))));
    }
  }
  worst = std::max(worst, (t * t - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
  return worst;
}

struct Eigenspaces {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
};

Eigenspaces split(const Eigen::MatrixXd& t) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (t + t.transpose()));
  std::vector<int> plus, minus;
  for (int i = 0; i < es.eigenvalues().size(); ++i) (es.eigenvalues()(i) > 0 ? plus : minus).push_back(i);
  Eigenspaces out{Eigen::MatrixXd(t.rows(), plus.size()), Eigen::MatrixXd(t.rows(), minus.size())};
  for (std::size_t i = 0; i < plus.size(); ++i) out.plus.col(i) = es.eigenvectors().col(plus[i]);
  for (std::size_t i = 0; i < minus.size(); ++i) out.minus.col(i) = es.eigenvectors().col(minus[i]);
  return out;
}

// Dimension of the centralizer of span(a) inside span(p).
int centralizer_dim(const Frame& frame, const Eigen::MatrixXd& a, const Eigen::MatrixXd& p) {
  if (p.cols() == 0) return 0;
  Eigen::MatrixXd stacked(a.cols() * a.rows(), p.cols());
  for (int i = 0; i < a.cols(); ++i) stacked.middleRows(i * a.rows(), a.rows()) = frame.ad(a.col(i)) * p;
  if (a.cols() == 0) return static_cast<int>(p.cols());
  return static_cast<int>(null_space(stacked, 1e-9).cols());
}

struct AbelianChoice {
  Eigen::MatrixXd basis;  // frame coordinates, orthonormal
  std::vector<Matrix> matrices;
  bool diagonal = false;
};

// A maximal abelian subspace of span(p): the diagonal part when that is
// maximal abelian, otherwise the centralizer of a generic element.
AbelianChoice maximal_abelian(const LieAlgebraBasis& alg, const Frame& frame, const Eigen::MatrixXd& p,
                              std::uint64_t seed) {
  AbelianChoice out;
  const int n = alg.matrix_size();
  const int dp = static_cast<int>(p.cols());
  if (dp == 0) {
    out.basis = Eigen::MatrixXd(alg.dim(), 0);
    return out;
  }
  Eigen::MatrixXd offdiag(2 * n * (n - 1), dp);
  for (int l = 0; l < dp; ++l) {
    const Matrix m = frame.element(p.col(l));
    int row = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if (r == c) continue;
        offdiag(row++, l) = m(r, c).real();
        offdiag(row++, l) = m(r, c).imag();
      }
  }
  const Eigen::MatrixXd z = null_space(offdiag, 1e-12);
  Eigen::MatrixXd a = orthonormalize(p * z);
  bool diagonal = a.cols() > 0 && centralizer_dim(frame, a, p) == a.cols();
  if (!diagonal) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd w(dp);
    for (int i = 0; i < dp; ++i) w(i) = normal(rng);
    const Eigen::VectorXd h = p * w;
    const Eigen::MatrixXd k = null_space(frame.ad(h) * p, 1e-9);
    a = orthonormalize(p * k);
  }
  out.basis = a;
  out.diagonal = diagonal;
  for (int i = 0; i < a.cols(); ++i) {
    Matrix m = frame.element(a.col(i));
    if (diagonal) m = Matrix(m.diagonal().asDiagonal());
    out.matrices.push_back(m);
  }
  return out;
}

double abelian_defect(const std::vector<Matrix>& hs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = 0; j < hs.size(); ++j) worst = std::max(worst, max_abs(bracket(hs[i], hs[j])));
  return worst;
}

}  // namespace

Matrix expm(const Matrix& x) { return x.exp(); }

double anti_hermitian_residual(const Matrix& x) { return max_abs(x + x.adjoint()); }

double unitary_residual(const Matrix& g) {
  return max_abs(g.adjoint() * g - Matrix::Identity(g.rows(), g.cols()));
}

LieAlgebraBasis LieAlgebraBasis::load(std::string_view name_in) {
  const std::string name = lower(name_in);
  if (name == "su2") return LieAlgebraBasis("su2", su2_basis(), false, true);
  if (name == "su3") return LieAlgebraBasis("su3", su3_basis(), false, true);
  if (name == "so3") return LieAlgebraBasis("so3", so3_basis(), true, false);
  if (name.rfind("so", 0) == 0) {
    std::string digits = name.substr(2);
    if (!digits.empty() && digits[0] == '_') digits = digits.substr(1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      const int n = std::stoi(digits);
      if (n >= 3 && n <= 12) return LieAlgebraBasis("so" + std::to_string(n), son_basis(n), true, false);
    }
  }
  throw ValidationError("unsupported algebra '" + std::string(name_in) + "' (su2, so3, su3, soN with 3 <= N <= 12)");
}

LieAlgebraBasis::LieAlgebraBasis(std::string name, std::vector<Matrix> basis, bool real, bool traceless)
    : name_(std::move(name)), basis_(std::move(basis)), real_(real), traceless_(traceless) {
  const int n = dim();
  gram_.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram_(i, j) = (basis_[i].adjoint() * basis_[j]).trace().real();
  gram_solver_.compute(gram_);

  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd ad(n, n);
    for (int j = 0; j < n; ++j) ad.col(j) = coords(bracket(basis_[i], basis_[j]));
    ad_basis_.push_back(ad);
  }
  killing_.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) killing_(i, j) = (ad_basis_[i] * ad_basis_[j]).trace();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-killing_);
  residuals_.killing_negative_definite = es.eigenvalues().minCoeff() > 0.0;
  if (!residuals_.killing_negative_definite) throw std::logic_error("Killing form of " + name_ + " is not negative definite");
  frame_ = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();

  const Eigen::MatrixXd P = -killing_;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      residuals_.structure =
          std::max(residuals_.structure, max_abs(bracket(basis_[i], basis_[j]) - element(ad_basis_[i].col(j))));
      for (int k = 0; k < n; ++k) {
        residuals_.antisymmetry = std::max(residuals_.antisymmetry, std::abs(ad_basis_[i](k, j) + ad_basis_[j](k, i)));
        const Matrix jac = bracket(bracket(basis_[i], basis_[j]), basis_[k]) +
                           bracket(bracket(basis_[j], basis_[k]), basis_[i]) +
                           bracket(bracket(basis_[k], basis_[i]), basis_[j]);
        residuals_.jacobi = std::max(residuals_.jacobi, max_abs(jac));
      }
    }
    const Eigen::MatrixXd inv = ad_basis_[i].transpose() * P + P * ad_basis_[i];
    residuals_.invariance = std::max(residuals_.invariance, inv.cwiseAbs().maxCoeff());
  }
  const double tol = Tolerances{}.algebra_membership;
  if (residuals_.structure > tol || residuals_.antisymmetry > tol || residuals_.jacobi > tol ||
      residuals_.invariance > tol) {
    throw std::logic_error("structure constant verification failed for " + name_);
  }
}

Eigen::MatrixXd LieAlgebraBasis::ad(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) out += x(i) * ad_basis_[i];
  return out;
}

Eigen::VectorXd LieAlgebraBasis::coords(const Matrix& x) const {
  Eigen::VectorXd rhs(dim());
  for (int i = 0; i < dim(); ++i) rhs(i) = basis_[i].cwiseProduct(x.conjugate()).sum().real();
  return gram_solver_.solve(rhs);
}

Matrix LieAlgebraBasis::element(const Eigen::VectorXd& c) const {
  Matrix out = Matrix::Zero(matrix_size(), matrix_size());
  for (int i = 0; i < dim(); ++i) out += c(i) * basis_[i];
  return out;
}

double LieAlgebraBasis::membership_residual(const Matrix& x) const {
  if (x.rows() != matrix_size() || x.cols() != matrix_size()) return std::numeric_limits<double>::infinity();
  return max_abs(x - element(coords(x)));
}

Involution Involution::parse(std::string_view spec_in, int n) {
  const std::string spec = lower(spec_in);
  Involution out;
  out.name_ = spec;
  if (spec == "conj" || spec == "so2" || spec == "so3" || spec == "so") {
    out.kind_ = Kind::conjugation;
    return out;
  }
  if (spec == "id") {
    out.kind_ = Kind::identity;
    return out;
  }
  int p = -1;
  if (spec == "u1diag") {
    p = 1;
  } else if (spec.rfind("diag:", 0) == 0) {
    const std::string digits = spec.substr(5);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) p = std::stoi(digits);
  }
  if (p >= 1 && p < n) {
    out.kind_ = Kind::diagonal;
    out.signs_ = Eigen::VectorXd::Constant(n, -1.0);
    out.signs_.head(p).setOnes();
    return out;
  }
  throw ValidationError("unsupported involution '" + std::string(spec_in) + "' (conj, u1diag, diag:p, id)");
}

Matrix Involution::apply(const Matrix& x) const {
  switch (kind_) {
    case Kind::conjugation:
      return x.conjugate();
    case Kind::diagonal: {
      if (x.rows() != signs_.size()) throw ValidationError("involution size mismatch");
      Matrix out = x;
      for (int r = 0; r < x.rows(); ++r)
        for (int c = 0; c < x.cols(); ++c) out(r, c) *= signs_(r) * signs_(c);
      return out;
    }
    case Kind::identity:
      break;
  }
  return x;
}

int RestrictedRootData::dimension_total() const {
  int n = n0();
  for (const auto& r : roots) n += r.dim;
  return n;
}

RestrictedRootData restricted_root_decomposition(const LieAlgebraBasis& alg, const Involution& theta,
                                                 const Tolerances& tol, std::uint64_t seed) {
  const Frame frame(alg);
  RestrictedRootData data;
  data.algebra = alg.name();
  data.involution = theta.name();
  data.N = alg.dim();
  data.involution_residual = involution_defect(alg, frame, theta);
  if (data.involution_residual > tol.group_membership) {
    throw ValidationError("involution '" + theta.name() + "' is not an involutive automorphism of " + alg.name());
  }
  const auto spaces = split(frame.matrix_of(theta));
  data.k_basis = spaces.plus;
  data.p_basis = spaces.minus;
  const auto a = maximal_abelian(alg, frame, data.p_basis, seed);
  data.a_basis = a.basis;
  data.a_diagonal = a.diagonal;
  data.abelian_residual = abelian_defect(a.matrices);
  if (data.abelian_residual > tol.algebra_membership) throw ValidationError("chosen subspace a is not abelian");
  if (centralizer_dim(frame, data.a_basis, data.p_basis) != data.a_basis.cols()) {
    throw ValidationError("chosen subspace a is not maximal abelian in p");
  }

  const int n = data.N;
  const int rank = static_cast<int>(data.a_basis.cols());
  std::vector<Eigen::MatrixXd> adH;
  for (int i = 0; i < rank; ++i) adH.push_back(frame.ad(data.a_basis.col(i)));

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> coeff(0.5, 1.5);
  Eigen::MatrixXd generic = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < rank; ++i) generic += (i % 2 ? -1.0 : 1.0) * coeff(rng) * adH[i];
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(generic * generic);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending, <= 0
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

  std::vector<std::vector<int>> clusters;
  for (int i = n - 1; i >= 0; --i) {
    if (!clusters.empty() && std::abs(ev(clusters.back().back()) - ev(i)) <= tol.root_cluster * scale) {
      clusters.back().push_back(i);
    } else {
      clusters.push_back({i});
    }
  }
  for (const auto& cl : clusters) {
    Eigen::MatrixXd v(n, cl.size());
    for (std::size_t c = 0; c < cl.size(); ++c) v.col(c) = es.eigenvectors().col(cl[c]);
    if (std::abs(ev(cl.front())) <= tol.root_cluster * scale) {
      data.g0_basis = v;
      continue;
    }
    const double d = static_cast<double>(cl.size());
    Eigen::VectorXd sq(rank);
    for (int i = 0; i < rank; ++i) sq(i) = std::max(0.0, -(v.transpose() * adH[i] * adH[i] * v).trace() / d);
    int i0 = 0;
    sq.maxCoeff(&i0);
    Eigen::VectorXd lambda(rank);
    const double lead = std::sqrt(sq(i0));
    for (int j = 0; j < rank; ++j) lambda(j) = -(v.transpose() * adH[i0] * adH[j] * v).trace() / d / lead;
    for (int j = 0; j < rank; ++j) {
      if (std::abs(lambda(j)) > 1e-9 * scale) {
        if (lambda(j) < 0) lambda = -lambda;
        break;
      }
    }
    for (int i = 0; i < rank; ++i) {
      const double r = (adH[i] * adH[i] * v + lambda(i) * lambda(i) * v).cwiseAbs().maxCoeff();
      data.eigen_residual = std::max(data.eigen_residual, r);
    }
    data.roots.push_back({lambda, static_cast<int>(cl.size()), v});
  }
  if (data.g0_basis.size() == 0 && data.g0_basis.cols() == 0) data.g0_basis = Eigen::MatrixXd(n, 0);
  return data;
}

BracketReport verify_bracket_pattern(const LieAlgebraBasis& alg, const RestrictedRootData& data,
                                     const Tolerances& tol) {
  const Frame frame(alg);
  const int n = data.N;
  BracketReport rep;
  // Subspace index 0 is g0; index a+1 is the root space of roots[a].
  std::vector<Eigen::MatrixXd> spaces{data.g0_basis};
  for (const auto& r : data.roots) spaces.push_back(r.basis);
  const auto find_root = [&](const Eigen::VectorXd& v, bool up_to_sign) -> int {
    if (v.norm() <= 1e-6) return 0;
    for (std::size_t a = 0; a < data.roots.size(); ++a) {
      const auto& l = data.roots[a].values;
      if ((l - v).norm() <= 1e-6 * (1.0 + l.norm())) return static_cast<int>(a) + 1;
      if (up_to_sign && (l + v).norm() <= 1e-6 * (1.0 + l.norm())) return static_cast<int>(a) + 1;
    }
    return -1;
  };
  const auto value = [&](int s) -> Eigen::VectorXd {
    return s == 0 ? Eigen::VectorXd::Zero(data.a_basis.cols()) : data.roots[s - 1].values;
  };
  const auto residual_outside = [&](const std::vector<int>& targets, const Eigen::VectorXd& w) {
    Eigen::VectorXd r = w;
    for (int t : targets) r -= spaces[t] * (spaces[t].transpose() * w);
    return r.norm();
  };
  const int count = static_cast<int>(spaces.size());
  for (int s1 = 0; s1 < count; ++s1) {
    for (int s2 = s1; s2 < count; ++s2) {
      std::vector<int> corrected, literal;
      const Eigen::VectorXd sum = value(s1) + value(s2);
      const Eigen::VectorXd diff = value(s1) - value(s2);
      if (s1 == 0 || s2 == 0) {
        corrected = literal = {s1 == 0 ? s2 : s1};
      } else if (s1 == s2) {
        corrected = literal = {0};
        if (int t = find_root(sum, false); t > 0) corrected.push_back(t), literal.push_back(t);
      } else {
        if (int t = find_root(sum, false); t >= 0) corrected.push_back(t), literal.push_back(t);
        if (int t = find_root(diff, true); t >= 0) corrected.push_back(t);
      }
      for (int i = 0; i < spaces[s1].cols(); ++i) {
        for (int j = 0; j < spaces[s2].cols(); ++j) {
          const Eigen::VectorXd w = frame.bracket(spaces[s1].col(i), spaces[s2].col(j));
          const double rc = residual_outside(corrected, w);
          rep.max_residual = std::max(rep.max_residual, rc);
          rep.max_literal_residual = std::max(rep.max_literal_residual, residual_outside(literal, w));
          if (rc > tol.bracket_residual) {
            rep.violations.push_back("[g" + std::to_string(s1) + ", g" + std::to_string(s2) +
                                     "] leaves its predicted target (residual " + std::to_string(rc) + ")");
          }
        }
      }
    }
  }
  rep.min_a_action = data.roots.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& r : data.roots) {
    double best = 0.0;
    for (int i = 0; i < data.a_basis.cols(); ++i) best = std::max(best, (frame.ad(data.a_basis.col(i)) * r.basis).norm());
    rep.min_a_action = std::min(rep.min_a_action, best);
  }
  Eigen::MatrixXd adapted(n, 0);
  for (const auto& s : spaces) {
    Eigen::MatrixXd next(n, adapted.cols() + s.cols());
    next << adapted, s;
    adapted = next;
  }
  rep.adapted_frame = adapted;
  if (adapted.cols() == n) {
    rep.adapted_constants.resize(static_cast<std::size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd c = adapted.transpose() * frame.bracket(adapted.col(i), adapted.col(j));
        for (int k = 0; k < n; ++k) rep.adapted_constants[(static_cast<std::size_t>(i) * n + j) * n + k] = c(k);
      }
  }
  rep.passed = rep.max_residual < tol.bracket_residual && data.dimension_total() == n &&
               (data.roots.empty() || rep.min_a_action > tol.bracket_residual);
  return rep;
}

std::string algebra_of_group(std::string_view group) {
  const std::string g = lower(group);
  if (g == "su2" || g == "su(2)") return "su2";
  if (g == "so3" || g == "so(3)") return "so3";
  if (g == "su3" || g == "su(3)") return "su3";
  throw ValidationError("unsupported group '" + std::string(group) + "' (SU2, SO3, SU3)");
}

HyperpolarReport section_orthogonality_check(std::string_view group, std::string_view k1, std::string_view k2,
                                             int n_samples, std::uint64_t seed, const Tolerances& tol) {
  const auto alg = LieAlgebraBasis::load(algebra_of_group(group));
  const Frame frame(alg);
  const int n = alg.dim();
  const auto th1 = Involution::parse(k1, alg.matrix_size());
  const auto th2 = Involution::parse(k2, alg.matrix_size());
  if (involution_defect(alg, frame, th1) > tol.group_membership || involution_defect(alg, frame, th2) > tol.group_membership) {
    throw ValidationError("K spec is not given by an involutive automorphism");
  }
  HyperpolarReport rep;
  rep.group = std::string(group);
  rep.k1 = th1.name();
  rep.k2 = th2.name();
  rep.group_dim = n;
  const Eigen::MatrixXd t1 = frame.matrix_of(th1), t2 = frame.matrix_of(th2);
  rep.involutions_commute = (t1 * t2 - t2 * t1).cwiseAbs().maxCoeff() < tol.group_membership;

  const auto s1 = split(t1), s2 = split(t2);
  Eigen::MatrixXd stacked(2 * n, n);
  stacked << t1 + Eigen::MatrixXd::Identity(n, n), t2 + Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd p12 = null_space(stacked, 1e-10);
  const auto a = maximal_abelian(alg, frame, p12, seed);
  rep.section_dim = static_cast<int>(a.basis.cols());
  rep.max_abelian = abelian_defect(a.matrices);

  std::vector<Matrix> k1m, k2m, am = a.matrices;
  for (int i = 0; i < s1.plus.cols(); ++i) k1m.push_back(frame.element(s1.plus.col(i)));
  for (int i = 0; i < s2.plus.cols(); ++i) k2m.push_back(frame.element(s2.plus.col(i)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  rep.orbit_dim = n;
  for (int s = 0; s < n_samples; ++s) {
    Matrix h = Matrix::Zero(alg.matrix_size(), alg.matrix_size());
    for (const auto& m : am) h += coeff(rng) * m;
    const Matrix g = expm(h);
    const Matrix ginv = g.adjoint();
    Eigen::MatrixXd orbit(n, k1m.size() + k2m.size());
    int col = 0;
    for (const auto& x : k1m) orbit.col(col++) = frame.coords(x);
    for (const auto& y : k2m) orbit.col(col++) = -frame.coords(g * y * ginv);
    for (int c = 0; c < orbit.cols(); ++c)
      for (int i = 0; i < a.basis.cols(); ++i)
        rep.max_residual = std::max(rep.max_residual, std::abs(orbit.col(c).dot(a.basis.col(i))));
    rep.orbit_dim = std::min(rep.orbit_dim, numerical_rank(orbit, 1e-8));
    ++rep.samples;
  }
  rep.dimension_sum = rep.orbit_dim + rep.section_dim;
  rep.passed = rep.involutions_commute && rep.max_residual < tol.orthogonality && rep.max_abelian == 0.0 &&
               rep.dimension_sum == n && rep.section_dim > 0;
  return rep;
}

}  // namespace focalis::liegroup
