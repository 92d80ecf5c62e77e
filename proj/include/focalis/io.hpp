#pragma once

// JSON formats for spectra, eigen grids, model configs, sampled paths,
// matrices and vectors.

#include <string>

#include <Eigen/Dense>

#include "json.hpp"

#include "focalis/focal.hpp"
#include "focalis/geomodel.hpp"
#include "focalis/liegroup.hpp"
#include "focalis/spectral.hpp"

namespace focalis::io {

using nlohmann::json;

/// Throws ValidationError for a missing or malformed file.
json read_json_file(const std::string& path);

spectral::SpectralData spectrum_from_json(const json& j);
json spectrum_to_json(const spectral::SpectralData& s);

focal::EigenGrid grid_from_json(const json& j);
json grid_to_json(const focal::EigenGrid& g);

geomodel::SphereProductConfig config_from_json(const json& j);
json config_to_json(const geomodel::SphereProductConfig& c);

/// {"group": "SU2", "samples": [[t, M], ...], "interpolation": "linear", "speed": 1}
/// with M a row-major list of [re, im] entries (or a list of rows).
liegroup::AlgebraPath path_from_json(const json& j);
liegroup::GaugePath gauge_path_from_json(const json& j);
json path_to_json(const liegroup::AlgebraPath& p);

liegroup::Matrix complex_matrix_from_json(const json& j);
json complex_matrix_to_json(const liegroup::Matrix& m);

/// Nested rows, or {"matrix": rows}.
Eigen::MatrixXd matrix_from_json(const json& j);
/// Flat array, or {"vector": array}.
Eigen::VectorXd vector_from_json(const json& j);
json matrix_to_json(const Eigen::MatrixXd& m);
json vector_to_json(const Eigen::VectorXd& v);

}  // namespace focalis::io
