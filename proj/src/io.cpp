#include "focalis/io.hpp"

#include <cmath>
#include <fstream>

#include "focalis/errors.hpp"

namespace focalis::io {
namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<spectral::Eigenvalue> side_from_json(const json& j, const char* key) {
  std::vector<spectral::Eigenvalue> out;
  if (!j.contains(key) || j.at(key).is_null()) return out;
  if (!j.at(key).is_array()) throw ValidationError(std::string("'") + key + "' must be an array");
  for (const auto& e : j.at(key)) {
    const int mult = e.contains("mult") ? field<int>(e, "mult") : 1;
    out.push_back({field<double>(e, "value"), mult});
  }
  return out;
}

json side_to_json(const std::vector<spectral::Eigenvalue>& side) {
  json arr = json::array();
  for (const auto& e : side) arr.push_back({{"value", e.value}, {"mult", e.mult}});
  return arr;
}

std::complex<double> complex_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ValidationError("complex entries must be [re, im]");
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

spectral::SpectralData spectrum_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("spectrum must be a JSON object");
  std::optional<spectral::TailModel> tail;
  if (j.contains("tail") && !j.at("tail").is_null()) {
    tail = spectral::TailModel{field<double>(j.at("tail"), "ratio"), field<double>(j.at("tail"), "scale")};
  }
  return spectral::SpectralData(side_from_json(j, "positives"), side_from_json(j, "negatives"), tail);
}

json spectrum_to_json(const spectral::SpectralData& s) {
  json j{{"positives", side_to_json(s.positives())}, {"negatives", side_to_json(s.negatives())}};
  j["tail"] = s.tail() ? json{{"ratio", s.tail()->ratio}, {"scale", s.tail()->scale}} : json(nullptr);
  return j;
}

focal::EigenGrid grid_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("eigen grid must be a JSON object");
  std::vector<focal::EigenPair> pairs;
  for (const auto& p : field<json>(j, "pairs")) {
    pairs.push_back({field<double>(p, "lambdaR"), field<double>(p, "lambdaA"), p.contains("mult") ? field<int>(p, "mult") : 1});
  }
  return focal::EigenGrid(std::move(pairs), j.contains("label") ? field<std::string>(j, "label") : std::string());
}

json grid_to_json(const focal::EigenGrid& g) {
  json pairs = json::array();
  for (const auto& p : g.pairs()) pairs.push_back({{"lambdaR", p.lambdaR}, {"lambdaA", p.lambdaA}, {"mult", p.mult}});
  return {{"label", g.label()}, {"pairs", pairs}};
}

geomodel::SphereProductConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("model config must be a JSON object");
  geomodel::SphereProductConfig c;
  for (const auto& b : field<json>(j, "blocks")) c.blocks.push_back({field<int>(b, "m"), field<double>(b, "r")});
  c.k1 = field<int>(j, "k1");
  c.rprime = field<std::vector<double>>(j, "rprime");
  c.k2 = field<int>(j, "k2");
  c.N = field<int>(j, "N");
  c.validate();
  return c;
}

json config_to_json(const geomodel::SphereProductConfig& c) {
  json blocks = json::array();
  for (const auto& b : c.blocks) blocks.push_back({{"m", b.m}, {"r", b.r}});
  return {{"blocks", blocks}, {"k1", c.k1}, {"rprime", c.rprime}, {"k2", c.k2}, {"N", c.N}};
}

liegroup::Matrix complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array");
  const bool rows = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (rows) {
    const auto n = j.size();
    liegroup::Matrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      if (!j[r].is_array() || j[r].size() != n) throw ValidationError("matrix rows must form a square");
      for (std::size_t c = 0; c < n; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
  }
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(j.size()))));
  if (n * n != j.size()) throw ValidationError("flat matrix needs a square number of entries");
  liegroup::Matrix m(n, n);
  for (std::size_t k = 0; k < j.size(); ++k) m(k / n, k % n) = complex_from_json(j[k]);
  return m;
}

json complex_matrix_to_json(const liegroup::Matrix& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

namespace {

std::vector<liegroup::Matrix> samples_from_json(const json& j) {
  const auto samples = field<json>(j, "samples");
  if (!samples.is_array() || samples.size() < 2) throw ValidationError("path needs at least two samples");
  const std::size_t S = samples.size() - 1;
  std::vector<liegroup::Matrix> out;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number()) throw ValidationError("path samples must be [t, matrix]");
    const double t = s[0].get<double>();
    if (std::abs(t - static_cast<double>(k) / S) > 1e-9) throw ValidationError("path samples must lie on the uniform grid k/S");
    out.push_back(complex_matrix_from_json(s[1]));
  }
  return out;
}

}  // namespace

liegroup::AlgebraPath path_from_json(const json& j) {
  liegroup::AlgebraPath p;
  p.samples = samples_from_json(j);
  p.group = j.contains("group") ? field<std::string>(j, "group") : std::string();
  if (j.contains("speed")) p.speed = field<double>(j, "speed");
  if (j.contains("interpolation")) {
    const auto mode = field<std::string>(j, "interpolation");
    if (mode == "linear") {
      p.interpolation = liegroup::Interpolation::linear;
    } else if (mode == "piecewise_constant") {
      p.interpolation = liegroup::Interpolation::piecewise_constant;
    } else {
      throw ValidationError("interpolation must be linear or piecewise_constant");
    }
  }
  p.validate();
  return p;
}

liegroup::GaugePath gauge_path_from_json(const json& j) {
  liegroup::GaugePath g;
  g.samples = samples_from_json(j);
  g.validate();
  return g;
}

json path_to_json(const liegroup::AlgebraPath& p) {
  json samples = json::array();
  const int S = p.intervals();
  for (int k = 0; k <= S; ++k) samples.push_back({static_cast<double>(k) / S, complex_matrix_to_json(p.samples[k])});
  return {{"group", p.group},
          {"speed", p.speed},
          {"interpolation", p.interpolation == liegroup::Interpolation::linear ? "linear" : "piecewise_constant"},
          {"samples", samples}};
}

Eigen::MatrixXd matrix_from_json(const json& j_in) {
  const json& j = j_in.is_object() ? j_in.contains("matrix") ? j_in.at("matrix") : j_in : j_in;
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ValidationError("matrix rows must be non-empty arrays");
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ValidationError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ValidationError("matrix entries must be numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j_in) {
  const json& j = j_in.is_object() ? j_in.contains("vector") ? j_in.at("vector") : j_in : j_in;
  if (!j.is_array()) throw ValidationError("vector must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError("vector entries must be numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace focalis::io
