#include "focalis/focal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "focalis/errors.hpp"
#include "focalis/spectral.hpp"

namespace focalis::focal {
namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const EigenGrid& grid, std::size_t index) {
  return grid.label().empty() ? "grid#" + std::to_string(index) : grid.label();
}

std::vector<double> expand(const EigenGrid& grid, double EigenPair::*field) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.total_multiplicity()));
  for (const auto& p : grid.pairs()) out.insert(out.end(), static_cast<std::size_t>(p.mult), p.*field);
  std::sort(out.begin(), out.end());
  return out;
}

bool close(double a, double b, const MultisetTolerance& tol) {
  return std::abs(a - b) <= tol.abs + tol.rel * std::max(std::abs(a), std::abs(b));
}

// Compares two sorted multisets; returns the largest entry difference
// (infinity on a size mismatch) and whether all entries are within tolerance.
std::pair<double, bool> compare_sorted(const std::vector<double>& a, const std::vector<double>& b,
                                       const MultisetTolerance& tol) {
  if (a.size() != b.size()) return {std::numeric_limits<double>::infinity(), false};
  double worst = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
    ok = ok && close(a[i], b[i], tol);
  }
  return {worst, ok};
}

std::optional<spectral::SpectralData> parallel_spectrum(const EigenGrid& grid, double r, double proximity) {
  std::vector<double> values;
  std::vector<int> mults;
  for (const auto& p : grid.pairs()) {
    const auto v = parallel_shape_eigenvalue(p.lambdaR, p.lambdaA, r, proximity);
    if (!v) return std::nullopt;
    values.push_back(*v);
    mults.push_back(p.mult);
  }
  return spectral::SpectralData::finite(values, mults);
}

}  // namespace

EigenGrid::EigenGrid(std::vector<EigenPair> pairs, std::string label) : label_(std::move(label)) {
  std::map<std::pair<double, double>, long> merged;
  for (const auto& p : pairs) {
    if (p.mult < 1) throw ValidationError("eigen grid multiplicities must be >= 1");
    if (!std::isfinite(p.lambdaR) || !std::isfinite(p.lambdaA)) throw ValidationError("eigen grid values must be finite");
    merged[{p.lambdaR, p.lambdaA}] += p.mult;
  }
  for (const auto& [key, m] : merged) {
    if (m > std::numeric_limits<int>::max()) throw ValidationError("eigen grid multiplicity overflow");
    pairs_.push_back({key.first, key.second, static_cast<int>(m)});
  }
}

long EigenGrid::total_multiplicity() const {
  long n = 0;
  for (const auto& p : pairs_) n += p.mult;
  return n;
}

void Window::validate() const {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && lo < hi)) {
    throw ValidationError("window must satisfy 0 < lo < hi");
  }
}

bool Window::contains(double r) const { return negative ? (-hi <= r && r <= -lo) : (lo <= r && r <= hi); }

double jacobi_amplitude(double lambdaR, double lambdaA, double s) {
  if (lambdaR > 0.0) {
    const double k = std::sqrt(lambdaR);
    return std::cos(k * s) - lambdaA * std::sin(k * s) / k;
  }
  if (lambdaR < 0.0) {
    const double k = std::sqrt(-lambdaR);
    return std::cosh(k * s) - lambdaA * std::sinh(k * s) / k;
  }
  return 1.0 - s * lambdaA;
}

double jacobi_derivative(double lambdaR, double lambdaA, double s) {
  if (lambdaR > 0.0) {
    const double k = std::sqrt(lambdaR);
    return -k * std::sin(k * s) - lambdaA * std::cos(k * s);
  }
  if (lambdaR < 0.0) {
    const double k = std::sqrt(-lambdaR);
    return k * std::sinh(k * s) - lambdaA * std::cosh(k * s);
  }
  return -lambdaA;
}

std::vector<double> focal_radii_pair(double lambdaR, double lambdaA, const Window& window, long max_count) {
  window.validate();
  std::vector<double> radii;
  if (lambdaR > 0.0) {
    // Zeros at k r = x0 + n pi with cot(x0) = lambdaA / k, x0 in (0, pi).
    const double k = std::sqrt(lambdaR);
    const double x0 = std::atan2(k, lambdaA);
    const double a = window.negative ? -window.hi : window.lo;
    const double b = window.negative ? -window.lo : window.hi;
    const double n_lo = std::ceil((a * k - x0) / kPi);
    const double n_hi = std::floor((b * k - x0) / kPi);
    if (n_hi - n_lo + 1 > static_cast<double>(max_count)) {
      throw ValidationError("focal family too dense for the window");
    }
    for (double n = n_lo; n <= n_hi; n += 1.0) {
      const double r = (x0 + n * kPi) / k;
      if (window.contains(r)) radii.push_back(r);
    }
  } else if (lambdaR < 0.0) {
    const double k = std::sqrt(-lambdaR);
    if (std::abs(lambdaA) > k) {
      const double r = std::atanh(k / lambdaA) / k;
      if (window.contains(r)) radii.push_back(r);
    }
  } else if (lambdaA != 0.0) {
    const double r = 1.0 / lambdaA;
    if (window.contains(r)) radii.push_back(r);
  }
  return radii;
}

FocalRadiusSet focal_set(const EigenGrid& grid, const Window& window, double merge_tol) {
  window.validate();
  std::vector<FocalRadius> all;
  for (const auto& p : grid.pairs()) {
    for (double r : focal_radii_pair(p.lambdaR, p.lambdaA, window)) all.push_back({r, p.mult});
  }
  std::sort(all.begin(), all.end(), [](const FocalRadius& a, const FocalRadius& b) { return a.radius < b.radius; });
  FocalRadiusSet out{{}, window};
  double last = 0.0;
  for (const auto& f : all) {
    if (!out.entries.empty() && f.radius - last <= merge_tol) {
      out.entries.back().mult += f.mult;
    } else {
      out.entries.push_back(f);
    }
    last = f.radius;
  }
  return out;
}

FredholmReport proper_fredholm_witness(const EigenGrid& grid, const Window& window,
                                       const std::vector<double>& epsilons, double merge_tol) {
  window.validate();
  FredholmReport report;
  for (const auto& p : grid.pairs()) {
    if (p.lambdaR > 0.0) {
      const double period = kPi / std::sqrt(p.lambdaR);
      if ((window.hi - window.lo) / period > 1e7 || period <= merge_tol) report.accumulation = true;
    }
  }
  if (report.accumulation) return report;

  const auto set = focal_set(grid, window, merge_tol);
  report.count = static_cast<long>(set.entries.size());
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    report.max_mult = std::max(report.max_mult, set.entries[i].mult);
    if (i > 0) report.gaps.push_back(set.entries[i].radius - set.entries[i - 1].radius);
  }
  const std::vector<double> eps = epsilons.empty() ? std::vector<double>{window.lo} : epsilons;
  for (double e : eps) {
    GapReport g{e, std::nullopt};
    for (std::size_t i = 1; i < set.entries.size(); ++i) {
      if (std::abs(set.entries[i].radius) < e || std::abs(set.entries[i - 1].radius) < e) continue;
      const double gap = set.entries[i].radius - set.entries[i - 1].radius;
      g.min_gap = g.min_gap ? std::min(*g.min_gap, gap) : gap;
    }
    if (g.min_gap && *g.min_gap <= merge_tol) report.accumulation = true;
    report.gap_by_epsilon.push_back(g);
  }
  return report;
}

std::optional<double> parallel_shape_eigenvalue(double lambdaR, double lambdaA, double r, double proximity) {
  const double y = jacobi_amplitude(lambdaR, lambdaA, r);
  const double dy = jacobi_derivative(lambdaR, lambdaA, r);
  if (std::abs(y) < proximity * (1.0 + std::abs(dy))) return std::nullopt;
  return -dy / y;
}

double riccati_oracle(double lambdaR, double lambdaA, double r, int steps, double proximity) {
  if (steps < 10) throw ConfigError("riccati oracle needs at least 10 steps");
  const double h = r / steps;
  double y = 1.0, dy = -lambdaA;
  for (int i = 0; i < steps; ++i) {
    const double k1y = dy, k1d = -lambdaR * y;
    const double k2y = dy + 0.5 * h * k1d, k2d = -lambdaR * (y + 0.5 * h * k1y);
    const double k3y = dy + 0.5 * h * k2d, k3d = -lambdaR * (y + 0.5 * h * k2y);
    const double k4y = dy + h * k3d, k4d = -lambdaR * (y + h * k3y);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  }
  if (std::abs(y) < proximity * (1.0 + std::abs(dy))) {
    throw OracleUndefined("riccati oracle evaluated at a focal radius");
  }
  return -dy / y;
}

std::optional<double> parallel_reg_mean_curvature(const EigenGrid& grid, double r, double proximity) {
  const auto spec = parallel_spectrum(grid, r, proximity);
  if (!spec) return std::nullopt;
  return spectral::reg_trace(*spec).value;
}

WeakReport weakly_isoparametric_check(const std::vector<EigenGrid>& grids, const MultisetTolerance& tol) {
  if (grids.empty()) throw ValidationError("weakly isoparametric check needs at least one grid");
  WeakReport report;
  report.passed = true;
  report.joint_agrees = true;
  const auto ref_R = expand(grids[0], &EigenPair::lambdaR);
  const auto ref_A = expand(grids[0], &EigenPair::lambdaA);
  const auto joint = [](const EigenGrid& g) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : g.pairs()) out.insert(out.end(), static_cast<std::size_t>(p.mult), {p.lambdaR, p.lambdaA});
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto ref_joint = joint(grids[0]);
  for (std::size_t i = 1; i < grids.size(); ++i) {
    const auto [dR, okR] = compare_sorted(ref_R, expand(grids[i], &EigenPair::lambdaR), tol);
    const auto [dA, okA] = compare_sorted(ref_A, expand(grids[i], &EigenPair::lambdaA), tol);
    report.max_residual_R = std::max(report.max_residual_R, dR);
    report.max_residual_A = std::max(report.max_residual_A, dA);
    if (!okR) report.issues.push_back(describe(grids[i], i) + ": lambdaR spectrum differs");
    if (!okA) report.issues.push_back(describe(grids[i], i) + ": lambdaA spectrum differs");
    report.passed = report.passed && okR && okA;
    const auto other = joint(grids[i]);
    bool same = other.size() == ref_joint.size();
    for (std::size_t k = 0; same && k < other.size(); ++k) {
      same = close(other[k].first, ref_joint[k].first, tol) && close(other[k].second, ref_joint[k].second, tol);
    }
    report.joint_agrees = report.joint_agrees && same;
  }
  return report;
}

IsoReport isoparametric_check(const std::vector<EigenGrid>& grids, const std::vector<double>& radii, double tolerance,
                              double proximity) {
  if (grids.empty()) throw ValidationError("isoparametric check needs at least one grid");
  IsoReport report;
  report.passed = true;
  for (double r : radii) {
    std::optional<double> reference;
    for (std::size_t i = 0; i < grids.size(); ++i) {
      IsoEntry entry{describe(grids[i], i), r, std::nullopt, false};
      const auto spec = parallel_spectrum(grids[i], r, proximity);
      if (!spec) {
        std::ostringstream msg;
        msg << entry.label << ": focal collision at r = " << r;
        report.issues.push_back(msg.str());
        report.passed = false;
      } else {
        entry.mean_curvature = spectral::reg_trace(*spec).value;
        entry.regularizable = spectral::is_regularizable(*spec);
        if (!entry.regularizable || !entry.mean_curvature) {
          report.issues.push_back(entry.label + ": parallel spectrum not regularizable");
          report.passed = false;
        } else if (!reference) {
          reference = entry.mean_curvature;
        } else {
          const double res = std::abs(*entry.mean_curvature - *reference) / (1.0 + std::abs(*reference));
          report.max_residual = std::max(report.max_residual, res);
          if (res > tolerance) {
            std::ostringstream msg;
            msg << entry.label << ": mean curvature differs at r = " << r << " (residual " << res << ")";
            report.issues.push_back(msg.str());
            report.passed = false;
          }
        }
      }
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

EquifocalReport equifocal_check(const std::vector<EigenGrid>& grids, const Window& window,
                                const MultisetTolerance& tol, double merge_tol) {
  if (grids.empty()) throw ValidationError("equifocal check needs at least one grid");
  EquifocalReport report;
  report.passed = true;
  for (const auto& g : grids) report.sets.push_back(focal_set(g, window, merge_tol));
  const auto& ref = report.sets[0].entries;
  for (std::size_t i = 1; i < grids.size(); ++i) {
    const auto& other = report.sets[i].entries;
    if (other.size() != ref.size()) {
      report.issues.push_back(describe(grids[i], i) + ": number of focal radii differs (" +
                              std::to_string(other.size()) + " vs " + std::to_string(ref.size()) + ")");
      report.max_residual = std::numeric_limits<double>::infinity();
      report.passed = false;
      continue;
    }
    for (std::size_t k = 0; k < ref.size(); ++k) {
      report.max_residual = std::max(report.max_residual, std::abs(other[k].radius - ref[k].radius));
      if (!close(other[k].radius, ref[k].radius, tol) || other[k].mult != ref[k].mult) {
        std::ostringstream msg;
        msg << describe(grids[i], i) << ": focal radius " << other[k].radius << " (mult " << other[k].mult
            << ") vs " << ref[k].radius << " (mult " << ref[k].mult << ")";
        report.issues.push_back(msg.str());
        report.passed = false;
      }
    }
  }
  return report;
}

}  // namespace focalis::focal
