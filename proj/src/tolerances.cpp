#include "focalis/tolerances.hpp"

#include <string>

#include "focalis/errors.hpp"

namespace focalis {

const std::vector<Tolerances::Entry>& Tolerances::table() {
  static const std::vector<Entry> entries = {
      {"cauchy_window", &Tolerances::cauchy_window, "fraction of trailing partial sums in the Cauchy test"},
      {"cauchy_threshold", &Tolerances::cauchy_threshold, "max spread of trailing partial sums, relative to max(1,|S|)"},
      {"zeta_tolerance", &Tolerances::zeta_tolerance, "max last Neville increment for the zeta trace"},
      {"focal_proximity", &Tolerances::focal_proximity, "|Y(r)| < tol*(1+|Y'(r)|) marks a focal radius"},
      {"radius_merge", &Tolerances::radius_merge, "absolute merge distance for focal radii"},
      {"spectrum_abs", &Tolerances::spectrum_abs, "absolute part of spectrum comparison"},
      {"spectrum_rel", &Tolerances::spectrum_rel, "relative part of spectrum comparison"},
      {"mean_curvature", &Tolerances::mean_curvature, "regularized mean curvature agreement, relative to 1+|H|"},
      {"normal_residual", &Tolerances::normal_residual, "max tangential component of a normal vector"},
      {"commutator", &Tolerances::commutator, "max |[A, R]| for curvature-adaptedness"},
      {"constraint", &Tolerances::constraint, "max constraint residual of sampled points"},
      {"algebra_membership", &Tolerances::algebra_membership, "anti-Hermiticity residual of algebra samples"},
      {"group_membership", &Tolerances::group_membership, "unitarity residual of group samples"},
      {"root_cluster", &Tolerances::root_cluster, "eigenvalue clustering for restricted roots"},
      {"bracket_residual", &Tolerances::bracket_residual, "bracket containment projection residual"},
      {"orthogonality", &Tolerances::orthogonality, "section/orbit orthogonality residual"},
      {"transport_consistency", &Tolerances::transport_consistency, "agreement of holonomy and transport routes"},
      {"symmetry", &Tolerances::symmetry, "operator symmetry residual"},
      {"invertibility", &Tolerances::invertibility, "min |eigenvalue| for Green operators"},
  };
  return entries;
}

void Tolerances::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("tolerance override must be name=value: " + std::string(assignment));
  }
  const auto name = assignment.substr(0, eq);
  const std::string text(assignment.substr(eq + 1));
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("tolerance value is not a number: " + text);
  }
  if (!(value > 0.0)) throw ConfigError("tolerance must be > 0: " + std::string(name));
  for (const auto& e : table()) {
    if (e.name == name) {
      this->*(e.field) = value;
      return;
    }
  }
  throw ConfigError("unknown tolerance: " + std::string(name));
}

}  // namespace focalis
