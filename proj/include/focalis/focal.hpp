#pragma once

// Focal radii, Jacobi amplitudes and parallel shape operators for
// curvature-adapted eigendata.
//
// On a common eigenspace of the normal Jacobi operator (eigenvalue lambdaR)
// and the shape operator (eigenvalue lambdaA), a strongly M-Jacobi field along
// the normal geodesic is a multiple of the scalar amplitude Y(s) solving
//   Y'' = -lambdaR * Y,  Y(0) = 1,  Y'(0) = -lambdaA.
// Its zeros are the focal radii; -Y'(r)/Y(r) is the shape eigenvalue of the
// parallel submanifold at distance r.

#include <optional>
#include <string>
#include <vector>

#include "focalis/tolerances.hpp"

namespace focalis::focal {

struct EigenPair {
  double lambdaR = 0.0;
  double lambdaA = 0.0;
  int mult = 1;
};

class EigenGrid {
 public:
  EigenGrid() = default;
  /// Validates multiplicities and merges pairs with identical (lambdaR, lambdaA).
  explicit EigenGrid(std::vector<EigenPair> pairs, std::string label = {});

  const std::vector<EigenPair>& pairs() const { return pairs_; }
  const std::string& label() const { return label_; }
  long total_multiplicity() const;

 private:
  std::vector<EigenPair> pairs_;
  std::string label_;
};

/// Search interval [lo, hi] with 0 < lo < hi. With `negative` set, the radii
/// searched are those in [-hi, -lo]; returned radii then carry their sign.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool negative = false;

  void validate() const;
  bool contains(double r) const;
};

struct FocalRadius {
  double radius = 0.0;
  int mult = 1;
};

struct FocalRadiusSet {
  std::vector<FocalRadius> entries;  // strictly increasing radii
  Window window;
};

double jacobi_amplitude(double lambdaR, double lambdaA, double s);
double jacobi_derivative(double lambdaR, double lambdaA, double s);

/// All zeros of the amplitude inside the window, increasing.
/// Throws ValidationError for a degenerate window or when a periodic family
/// would have more than `max_count` members in it.
std::vector<double> focal_radii_pair(double lambdaR, double lambdaA, const Window& window,
                                     long max_count = 10'000'000);

FocalRadiusSet focal_set(const EigenGrid& grid, const Window& window,
                         double merge_tol = Tolerances{}.radius_merge);

struct GapReport {
  double epsilon = 0.0;
  std::optional<double> min_gap;  // none when fewer than two radii lie in [eps, hi]
};

struct FredholmReport {
  long count = 0;
  int max_mult = 0;
  std::vector<double> gaps;  // consecutive differences of the focal set
  std::vector<GapReport> gap_by_epsilon;
  bool accumulation = false;  // some family clusters away from 0 at this truncation
};

/// Truncation surrogate of properness: finitely many focal radii of finite
/// multiplicity in the window, separated on every [eps, hi].
FredholmReport proper_fredholm_witness(const EigenGrid& grid, const Window& window,
                                       const std::vector<double>& epsilons = {},
                                       double merge_tol = Tolerances{}.radius_merge);

/// -Y'(r)/Y(r); nullopt when r is (numerically) a focal radius.
std::optional<double> parallel_shape_eigenvalue(double lambdaR, double lambdaA, double r,
                                                double proximity = Tolerances{}.focal_proximity);

/// Independent RK4 integration of the Jacobi equation; throws OracleUndefined
/// near a focal radius and ConfigError for steps < 10.
double riccati_oracle(double lambdaR, double lambdaA, double r, int steps,
                      double proximity = Tolerances{}.focal_proximity);

/// Regularized trace of the parallel shape operator at distance r; nullopt
/// when r is a focal radius of some pair.
std::optional<double> parallel_reg_mean_curvature(const EigenGrid& grid, double r,
                                                  double proximity = Tolerances{}.focal_proximity);

struct MultisetTolerance {
  double abs = Tolerances{}.spectrum_abs;
  double rel = Tolerances{}.spectrum_rel;
};

struct WeakReport {
  bool passed = false;
  double max_residual_R = 0.0;  // largest sorted-entry difference of the lambdaR multisets
  double max_residual_A = 0.0;
  bool joint_agrees = false;    // the (lambdaR, lambdaA) multisets also agree
  std::vector<std::string> issues;
};

/// Marginal multisets {(lambdaA, mult)} and {(lambdaR, mult)} agree across grids.
WeakReport weakly_isoparametric_check(const std::vector<EigenGrid>& grids, const MultisetTolerance& tol = {});

struct IsoEntry {
  std::string label;
  double r = 0.0;
  std::optional<double> mean_curvature;  // nullopt: focal collision
  bool regularizable = false;
};

struct IsoReport {
  bool passed = false;
  double max_residual = 0.0;  // max |H - H_ref| / (1 + |H_ref|) per radius
  std::vector<IsoEntry> entries;
  std::vector<std::string> issues;
};

IsoReport isoparametric_check(const std::vector<EigenGrid>& grids, const std::vector<double>& radii,
                              double tolerance = Tolerances{}.mean_curvature,
                              double proximity = Tolerances{}.focal_proximity);

struct EquifocalReport {
  bool passed = false;
  double max_residual = 0.0;  // largest radius difference between matched entries
  std::vector<FocalRadiusSet> sets;
  std::vector<std::string> issues;
};

EquifocalReport equifocal_check(const std::vector<EigenGrid>& grids, const Window& window,
                                const MultisetTolerance& tol = {},
                                double merge_tol = Tolerances{}.radius_merge);

}  // namespace focalis::focal
