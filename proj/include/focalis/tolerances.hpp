#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace focalis {

// Central table of default tolerances. Every module option struct takes its
// defaults from here; the CLI exposes each entry to `--tol name=value`.
struct Tolerances {
  // spectral
  double cauchy_window = 0.1;        // fraction of the partial sums inspected
  double cauchy_threshold = 1e-6;    // relative to max(1, |S_N|)
  double zeta_tolerance = 1e-6;      // accepted extrapolation increment (relative)
  // focal
  double focal_proximity = 1e-9;     // |Y(r)| < tol * (1 + |Y'(r)|) is focal
  double radius_merge = 1e-9;        // absolute
  double spectrum_abs = 1e-9;
  double spectrum_rel = 1e-12;
  double mean_curvature = 1e-9;      // relative to 1 + |H|
  // geomodel
  double normal_residual = 1e-9;
  double commutator = 1e-9;
  double constraint = 1e-12;
  // liegroup
  double algebra_membership = 1e-12;
  double group_membership = 1e-10;
  double root_cluster = 1e-8;
  double bracket_residual = 1e-9;
  double orthogonality = 1e-8;
  double transport_consistency = 1e-6;  // agreement of two transport routes
  // greenop
  double symmetry = 1e-12;
  double invertibility = 1e-12;

  struct Entry {
    std::string_view name;
    double Tolerances::*field;
    std::string_view description;
  };
  static const std::vector<Entry>& table();

  /// Applies `name=value`; throws ConfigError for unknown names or values <= 0.
  void set(std::string_view assignment);
};

}  // namespace focalis
