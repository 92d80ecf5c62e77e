#include <algorithm>
#include <cctype>
#include <cmath>

#include "focalis/errors.hpp"
#include "focalis/liegroup.hpp"

namespace focalis::liegroup {
namespace {

void require_square(const std::vector<Matrix>& samples, const char* what) {
  if (samples.size() < 2) throw ValidationError(std::string(what) + " needs at least two samples");
  const auto n = samples.front().rows();
  for (const auto& m : samples) {
    if (m.rows() != n || m.cols() != n) throw ValidationError(std::string(what) + " samples must be square of equal size");
  }
}

// Projects a numerically computed element back onto the algebra of `group`.
Matrix project(const Matrix& x, const std::string& group) {
  Matrix out = 0.5 * (x - x.adjoint());
  std::string g(group);
  std::transform(g.begin(), g.end(), g.begin(), [](unsigned char c) { return std::tolower(c); });
  if (g.rfind("su", 0) == 0) {
    out -= (out.trace() / static_cast<double>(out.rows())) * Matrix::Identity(out.rows(), out.cols());
  } else if (g.rfind("so", 0) == 0) {
    out = Matrix(out.real().cast<std::complex<double>>());
  }
  return out;
}

// Order-2 finite-difference derivative of sampled group elements.
// Fourth-order finite differences; five-point one-sided stencils at the ends.
std::vector<Matrix> derivative(const std::vector<Matrix>& g) {
  const int S = static_cast<int>(g.size()) - 1;
  const double h = 1.0 / S;
  std::vector<Matrix> d(g.size());
  if (S < 4) {
    d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    d[S] = (3.0 * g[S] - 4.0 * g[S - 1] + g[S - 2]) / (2.0 * h);
    for (int k = 1; k < S; ++k) d[k] = (g[k + 1] - g[k - 1]) / (2.0 * h);
    return d;
  }
  auto forward = [&](int k, int dir) -> Matrix {
    return dir * (-25.0 * g[k] + 48.0 * g[k + dir] - 36.0 * g[k + 2 * dir] + 16.0 * g[k + 3 * dir] -
                  3.0 * g[k + 4 * dir]) / (12.0 * h);
  };
  d[0] = forward(0, 1);
  d[1] = (-3.0 * g[0] - 10.0 * g[1] + 18.0 * g[2] - 6.0 * g[3] + g[4]) / (12.0 * h);
  d[S] = forward(S, -1);
  d[S - 1] = -(-3.0 * g[S] - 10.0 * g[S - 1] + 18.0 * g[S - 2] - 6.0 * g[S - 3] + g[S - 4]) / (12.0 * h);
  for (int k = 2; k < S - 1; ++k) d[k] = (g[k - 2] - 8.0 * g[k - 1] + 8.0 * g[k + 1] - g[k + 2]) / (12.0 * h);
  return d;
}

// Ad(g) u + sign * g' g^{-1}, sample by sample.
AlgebraPath gauge_combine(const GaugePath& g, const AlgebraPath& u, double sign) {
  g.validate();
  u.validate();
  if (g.samples.size() != u.samples.size()) throw ValidationError("gauge path and algebra path grids differ");
  if (g.samples.front().rows() != u.samples.front().rows()) throw ValidationError("gauge path and algebra path sizes differ");
  if (g.samples.size() < 3) throw ValidationError("gauge action needs at least three samples");
  const auto dg = derivative(g.samples);
  AlgebraPath out = u;
  for (std::size_t k = 0; k < g.samples.size(); ++k) {
    const Matrix ginv = g.samples[k].inverse();
    out.samples[k] = project(g.samples[k] * u.samples[k] * ginv + sign * dg[k] * ginv, u.group);
  }
  return out;
}

AlgebraPath negated(const AlgebraPath& u) {
  AlgebraPath out = u;
  for (auto& m : out.samples) m = -m;
  return out;
}

}  // namespace

Matrix AlgebraPath::at(double t) const {
  const int S = intervals();
  if (S <= 0) return samples.front();
  const double x = std::clamp(t, 0.0, 1.0) * S;
  const int k = std::min(static_cast<int>(std::floor(x)), S - 1);
  if (interpolation == Interpolation::piecewise_constant) return samples[k];
  const double frac = x - k;
  return (1.0 - frac) * samples[k] + frac * samples[k + 1];
}

void AlgebraPath::validate(double tol) const {
  require_square(samples, "algebra path");
  if (!(speed > 0.0)) throw ValidationError("path speed must be > 0");
  for (const auto& m : samples) {
    if (anti_hermitian_residual(m) > tol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
      throw ValidationError("algebra path sample is not anti-Hermitian");
    }
  }
}

void GaugePath::validate(double tol) const {
  require_square(samples, "gauge path");
  for (const auto& m : samples) {
    if (unitary_residual(m) > tol) throw ValidationError("gauge path sample is not unitary");
  }
}

Matrix transport_field(const std::function<Matrix(double)>& u, int n, int steps) {
  if (steps < 1) throw ConfigError("transport needs at least one step");
  const double h = 1.0 / steps;
  Matrix g = Matrix::Identity(n, n);
  for (int k = 0; k < steps; ++k) g = expm(h * u((k + 0.5) * h)) * g;
  return g;
}

Matrix transport(const AlgebraPath& u, int steps) {
  u.validate();
  if (steps < 2 * u.intervals()) throw ConfigError("transport needs at least 2 steps per sample interval");
  return transport_field([&u](double t) { return u.at(t); }, static_cast<int>(u.samples.front().rows()), steps);
}

std::vector<Matrix> transport_samples(const AlgebraPath& u, int steps) {
  u.validate();
  const int S = u.intervals();
  if (steps < 2 * S || steps % S != 0) {
    throw ConfigError("sampled transport needs a step count that is a multiple of the intervals, >= 2 per interval");
  }
  const int per = steps / S;
  const double h = 1.0 / steps;
  const auto n = u.samples.front().rows();
  std::vector<Matrix> out{Matrix::Identity(n, n)};
  Matrix g = out.front();
  for (int k = 0; k < steps; ++k) {
    g = expm(h * u.at((k + 0.5) * h)) * g;
    if ((k + 1) % per == 0) out.push_back(g);
  }
  return out;
}

AlgebraPath gauge_act(const GaugePath& g, const AlgebraPath& u) { return gauge_combine(g, u, 1.0); }

ConnectionPath gauge_connection(const GaugePath& gamma, const ConnectionPath& omega) {
  return gauge_combine(gamma, omega, -1.0);
}

AlgebraPath pullback_connection(const ConnectionPath& omega) {
  omega.validate();
  return negated(omega);
}

AlgebraPath refined(const AlgebraPath& u, int intervals) {
  u.validate();
  if (intervals < 1 || intervals % u.intervals() != 0) {
    throw ConfigError("refinement must be a multiple of the sample intervals");
  }
  AlgebraPath out = u;
  out.samples.clear();
  for (int k = 0; k <= intervals; ++k) out.samples.push_back(u.at(static_cast<double>(k) / intervals));
  return out;
}

AlgebraPath pullback_connection(const ConnectionPath& omega_in, const ConnectionPath& omega0_in, int steps,
                                int intervals) {
  omega_in.validate();
  if (omega_in.samples.size() != omega0_in.samples.size()) throw ValidationError("connection grids differ");
  const bool refine = intervals > 0 && intervals != omega_in.intervals();
  const ConnectionPath omega = refine ? refined(omega_in, intervals) : omega_in;
  const ConnectionPath omega0 = refine ? refined(omega0_in, intervals) : omega0_in;
  const auto k0 = transport_samples(negated(omega0), steps);
  AlgebraPath out = omega;
  for (std::size_t k = 0; k < omega.samples.size(); ++k) {
    const Matrix& kk = k0[k];
    out.samples[k] = project(-(kk.adjoint() * (omega.samples[k] - omega0.samples[k]) * kk), omega.group);
  }
  return out;
}

Matrix holonomy_element(const ConnectionPath& omega, const ConnectionPath& omega0, int steps) {
  if (omega.samples.size() != omega0.samples.size()) throw ValidationError("connection grids differ");
  const Matrix k = transport(negated(omega), steps);
  const Matrix k0 = transport(negated(omega0), steps);
  return k0.adjoint() * k;
}

GaugePath lambda_c(const GaugePath& gamma, const ConnectionPath& omega0, int steps) {
  gamma.validate();
  if (gamma.samples.size() != omega0.samples.size()) throw ValidationError("gauge path and connection grids differ");
  const auto k0 = transport_samples(negated(omega0), steps);
  GaugePath rho;
  for (std::size_t k = 0; k < gamma.samples.size(); ++k) rho.samples.push_back(k0[k].adjoint() * gamma.samples[k] * k0[k]);
  return rho;
}

}  // namespace focalis::liegroup
