#include "focalis/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "focalis/errors.hpp"
#include "focalis/focal.hpp"
#include "focalis/geomodel.hpp"
#include "focalis/greenop.hpp"
#include "focalis/io.hpp"
#include "focalis/liegroup.hpp"
#include "focalis/spectral.hpp"

namespace focalis::cli {
namespace {

using io::json;

struct Options {
  std::vector<std::string> tol;
  std::string out;
  std::string format = "json";
  // trace
  std::string spec;
  bool zeta = false;
  bool square = false;
  bool accelerate = false;
  // focal / parallel / check
  std::string grid;
  std::string window;
  bool negative = false;
  double r = 0.0;
  std::string mode;
  std::string grids;
  std::string radii;
  // example41
  std::string config;
  int points = 100;
  std::uint64_t seed = 7;
  // liegroup
  std::string path;
  int steps = 0;
  std::string omega;
  std::string omega0;
  std::string algebra;
  std::string theta;
  std::string group;
  std::string k1;
  std::string k2;
  int samples = 50;
  // greenop
  std::string op;
  std::string psi;
  bool project = false;
  int box_samples = 64;
  double speed = 1.0;
  bool periodic = false;
};

struct Outcome {
  json result = json::object();
  bool passed = true;
  std::string table;  // key of the result table used for CSV output
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

focal::Window parse_window(const std::string& text, bool negative) {
  const auto v = parse_list(text, "window");
  if (v.size() != 2) throw ValidationError("window must be given as a,b");
  focal::Window w{v[0], v[1], negative};
  w.validate();
  return w;
}

json value_or_divergent(const spectral::TraceResult& r) {
  return r.value ? json(*r.value) : json("divergent");
}

json optional_or(const std::optional<double>& v, const char* fallback) { return v ? json(*v) : json(fallback); }

json focal_set_json(const focal::FocalRadiusSet& s) {
  json arr = json::array();
  for (const auto& e : s.entries) arr.push_back({{"radius", e.radius}, {"mult", e.mult}});
  return arr;
}

json tolerance_json(const Tolerances& tol) {
  json j = json::object();
  for (const auto& e : Tolerances::table()) j[std::string(e.name)] = tol.*(e.field);
  return j;
}

std::vector<focal::EigenGrid> load_grids(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ValidationError("grid directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError("no .json grids in '" + dir + "'");
  std::vector<focal::EigenGrid> grids;
  for (const auto& f : files) {
    auto g = io::grid_from_json(io::read_json_file(f.string()));
    if (g.label().empty()) g = focal::EigenGrid(g.pairs(), f.stem().string());
    grids.push_back(std::move(g));
  }
  return grids;
}

Outcome cmd_trace(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["spec"] = o.spec;
  cfg["zeta"] = o.zeta;
  cfg["square"] = o.square;
  cfg["accelerate"] = o.accelerate;
  const auto spec = io::spectrum_from_json(io::read_json_file(o.spec));
  spectral::TraceOptions opts{tol.cauchy_window, tol.cauchy_threshold, o.accelerate};
  Outcome out;
  const auto tr = spectral::reg_trace(spec, opts);
  out.result["tr_r"] = value_or_divergent(tr);
  out.result["tr_r_error"] = tr.error;
  if (o.zeta) {
    auto zc = spectral::ZetaConfig::standard();
    zc.tolerance = tol.zeta_tolerance;
    zc.cauchy_window = tol.cauchy_window;
    zc.cauchy_threshold = tol.cauchy_threshold;
    const auto z = spectral::zeta_trace(spec, zc);
    out.result["tr_zeta"] = value_or_divergent(z);
    out.result["tr_zeta_error"] = z.error;
  }
  const auto sq = spectral::trace_square(spec, opts);
  if (o.square) {
    out.result["tr_sq"] = value_or_divergent(sq);
    out.result["tr_sq_error"] = sq.error;
  }
  out.result["regularizable"] = !tr.divergent() && !sq.divergent();
  return out;
}

Outcome cmd_focal(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["grid"] = o.grid;
  cfg["window"] = o.window;
  cfg["negative"] = o.negative;
  const auto grid = io::grid_from_json(io::read_json_file(o.grid));
  const auto window = parse_window(o.window, o.negative);
  const auto set = focal::focal_set(grid, window, tol.radius_merge);
  const auto w = focal::proper_fredholm_witness(grid, window, {}, tol.radius_merge);
  Outcome out;
  out.table = "radii";
  out.result["radii"] = focal_set_json(set);
  out.result["count"] = w.count;
  out.result["max_mult"] = w.max_mult;
  out.result["min_gap"] = w.gaps.empty() ? json(nullptr) : json(*std::min_element(w.gaps.begin(), w.gaps.end()));
  out.result["accumulation"] = w.accumulation;
  out.passed = !w.accumulation;
  return out;
}

Outcome cmd_parallel(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["grid"] = o.grid;
  cfg["r"] = o.r;
  const auto grid = io::grid_from_json(io::read_json_file(o.grid));
  Outcome out;
  out.table = "pairs";
  json pairs = json::array();
  for (const auto& p : grid.pairs()) {
    const auto v = focal::parallel_shape_eigenvalue(p.lambdaR, p.lambdaA, o.r, tol.focal_proximity);
    pairs.push_back({{"lambdaR", p.lambdaR}, {"lambdaA", p.lambdaA}, {"mult", p.mult}, {"eigenvalue", optional_or(v, "focal")}});
  }
  const auto h = focal::parallel_reg_mean_curvature(grid, o.r, tol.focal_proximity);
  out.result["pairs"] = pairs;
  out.result["mean_curvature"] = optional_or(h, "focal");
  out.passed = h.has_value();
  return out;
}

Outcome cmd_check(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["mode"] = o.mode;
  cfg["grids"] = o.grids;
  const auto grids = load_grids(o.grids);
  const focal::MultisetTolerance mt{tol.spectrum_abs, tol.spectrum_rel};
  Outcome out;
  if (o.mode == "weak") {
    const auto rep = focal::weakly_isoparametric_check(grids, mt);
    out.result["residual_lambdaR"] = rep.max_residual_R;
    out.result["residual_lambdaA"] = rep.max_residual_A;
    out.result["joint_multisets_agree"] = rep.joint_agrees;
    out.result["issues"] = rep.issues;
    out.passed = rep.passed;
  } else if (o.mode == "iso") {
    if (o.radii.empty()) throw ValidationError("check iso needs --radii");
    cfg["radii"] = o.radii;
    const auto rep = focal::isoparametric_check(grids, parse_list(o.radii, "radii"), tol.mean_curvature, tol.focal_proximity);
    json rows = json::array();
    for (const auto& e : rep.entries) {
      rows.push_back({{"label", e.label}, {"r", e.r}, {"mean_curvature", optional_or(e.mean_curvature, "focal")},
                      {"regularizable", e.regularizable}});
    }
    out.table = "entries";
    out.result["entries"] = rows;
    out.result["residual"] = rep.max_residual;
    out.result["issues"] = rep.issues;
    out.passed = rep.passed;
  } else {
    if (o.window.empty()) throw ValidationError("check equifocal needs --window");
    cfg["window"] = o.window;
    cfg["negative"] = o.negative;
    const auto rep = focal::equifocal_check(grids, parse_window(o.window, o.negative), mt, tol.radius_merge);
    json rows = json::array();
    for (std::size_t i = 0; i < grids.size(); ++i) {
      for (const auto& e : rep.sets[i].entries) rows.push_back({{"label", grids[i].label()}, {"radius", e.radius}, {"mult", e.mult}});
    }
    out.table = "entries";
    out.result["entries"] = rows;
    out.result["residual"] = std::isfinite(rep.max_residual) ? json(rep.max_residual) : json("inf");
    out.result["issues"] = rep.issues;
    out.passed = rep.passed;
  }
  out.result["grid_count"] = grids.size();
  out.result["verdict"] = out.passed;
  return out;
}

Outcome cmd_example41(const Options& o, const Tolerances& tol, json& cfg) {
  const auto config = o.config.empty() ? geomodel::SphereProductConfig::defaults()
                                       : io::config_from_json(io::read_json_file(o.config));
  const std::vector<double> radii = o.radii.empty() ? std::vector<double>{0.05, 0.1, 0.2} : parse_list(o.radii, "radii");
  const auto window = parse_window(o.window.empty() ? std::string("0.01,5") : o.window, o.negative);
  cfg["model"] = io::config_to_json(config);
  cfg["points"] = o.points;
  cfg["seed"] = o.seed;
  cfg["radii"] = radii;
  cfg["window"] = {window.lo, window.hi};
  const auto model = geomodel::build_model(config, o.points, o.seed);
  const auto field = geomodel::random_normal_field(config, o.seed + 1);
  const auto rep = geomodel::verify_example41(model, field, radii, window, tol);
  Outcome out;
  out.table = "points";
  json rows = json::array();
  for (const auto& p : rep.points) {
    json row{{"index", p.index},
             {"constraint_residual", p.constraint_residual},
             {"commutator", p.commutator},
             {"tr_r", p.tr_shape},
             {"tr_r_dense", p.tr_shape_dense},
             {"tr_r_printed_factor", p.tr_shape_printed},
             {"focal_radii", focal_set_json(p.focal)}};
    for (std::size_t k = 0; k < radii.size(); ++k) {
      std::ostringstream key;
      key << "mean_curvature_r" << radii[k];
      row[key.str()] = optional_or(p.mean_curvature[k], "focal");
    }
    rows.push_back(row);
  }
  out.result["field"] = {{"block_coeffs", rep.field.block_coeffs}, {"odd", rep.field.odd}};
  out.result["block_dims"] = rep.block_dims;
  out.result["printed_dims"] = rep.printed_dims;
  out.result["multiplicity_mismatch"] = rep.multiplicity_mismatch;
  out.result["points"] = rows;
  out.result["max_commutator"] = rep.max_commutator;
  out.result["max_constraint_residual"] = rep.max_constraint_residual;
  out.result["max_mean_curvature_spread"] = rep.max_mean_curvature_spread;
  out.result["weakly_isoparametric"] = rep.weakly_isoparametric;
  out.result["isoparametric"] = rep.isoparametric;
  out.result["equifocal"] = rep.equifocal;
  out.passed = rep.passed;
  return out;
}

int default_steps(int intervals, int requested) {
  if (requested > 0) return requested;
  int per = std::max(2, (1000 + intervals - 1) / intervals);
  per += per % 2;
  return per * intervals;
}

Outcome cmd_transport(const Options& o, const Tolerances& tol, json& cfg) {
  const auto path = io::path_from_json(io::read_json_file(o.path));
  const int steps = default_steps(path.intervals(), o.steps);
  cfg["path"] = o.path;
  cfg["steps"] = steps;
  const auto phi = liegroup::transport(path, steps);
  Outcome out;
  out.result["phi"] = io::complex_matrix_to_json(phi);
  out.result["group_residual"] = liegroup::unitary_residual(phi);
  out.passed = liegroup::unitary_residual(phi) < tol.group_membership;
  return out;
}

Outcome cmd_holonomy(const Options& o, const Tolerances& tol, json& cfg) {
  const auto omega = io::path_from_json(io::read_json_file(o.omega));
  const auto omega0 = io::path_from_json(io::read_json_file(o.omega0));
  const int steps = default_steps(omega.intervals(), o.steps);
  cfg["omega"] = o.omega;
  cfg["omega0"] = o.omega0;
  cfg["steps"] = steps;
  const auto hol = liegroup::holonomy_element(omega, omega0, steps);
  const int S = omega.intervals();
  const int intervals = (steps % 2 == 0 && (steps / 2) % S == 0) ? steps / 2 : S;
  cfg["mu_intervals"] = intervals;
  const auto mu = liegroup::pullback_connection(omega, omega0, steps, intervals);
  const auto phi_mu = liegroup::transport(mu, steps);
  const double residual = (hol - phi_mu).cwiseAbs().maxCoeff();
  Outcome out;
  out.result["hol"] = io::complex_matrix_to_json(hol);
  out.result["phi_mu"] = io::complex_matrix_to_json(phi_mu);
  out.result["consistency_residual"] = residual;
  out.result["group_residual"] = liegroup::unitary_residual(hol);
  out.passed = residual < tol.transport_consistency && liegroup::unitary_residual(hol) < tol.group_membership;
  return out;
}

Outcome cmd_roots(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["algebra"] = o.algebra;
  cfg["theta"] = o.theta;
  cfg["seed"] = o.seed;
  const auto alg = liegroup::LieAlgebraBasis::load(o.algebra);
  const auto theta = liegroup::Involution::parse(o.theta, alg.matrix_size());
  const auto data = liegroup::restricted_root_decomposition(alg, theta, tol, o.seed);
  const auto br = liegroup::verify_bracket_pattern(alg, data, tol);
  Outcome out;
  out.table = "roots";
  json roots = json::array();
  for (const auto& r : data.roots) {
    roots.push_back({{"values", std::vector<double>(r.values.data(), r.values.data() + r.values.size())},
                     {"n_a", r.dim},
                     {"multiplicity", r.dim / 2}});
  }
  out.result["N"] = data.N;
  out.result["rank"] = data.a_basis.cols();
  out.result["dim_k"] = data.k_basis.cols();
  out.result["dim_p"] = data.p_basis.cols();
  out.result["n0"] = data.n0();
  out.result["roots"] = roots;
  out.result["dimension_identity"] = data.dimension_total() == data.N;
  out.result["eigen_residual"] = data.eigen_residual;
  out.result["bracket_residual"] = br.max_residual;
  out.result["bracket_residual_sum_only"] = br.max_literal_residual;
  out.result["min_a_action"] = br.min_a_action;
  out.passed = br.passed && data.eigen_residual < tol.bracket_residual;
  return out;
}

Outcome cmd_hyperpolar(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["group"] = o.group;
  cfg["k1"] = o.k1;
  cfg["k2"] = o.k2;
  cfg["samples"] = o.samples;
  cfg["seed"] = o.seed;
  const auto rep = liegroup::section_orthogonality_check(o.group, o.k1, o.k2, o.samples, o.seed, tol);
  Outcome out;
  out.result["involutions_commute"] = rep.involutions_commute;
  out.result["group_dim"] = rep.group_dim;
  out.result["section_dim"] = rep.section_dim;
  out.result["orbit_dim"] = rep.orbit_dim;
  out.result["dimension_sum"] = rep.dimension_sum;
  out.result["orthogonality_residual"] = rep.max_residual;
  out.result["abelian_residual"] = rep.max_abelian;
  out.passed = rep.passed;
  return out;
}

Outcome cmd_green(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["op"] = o.op;
  cfg["psi"] = o.psi;
  cfg["project"] = o.project;
  const greenop::OperatorMatrix op(io::matrix_from_json(io::read_json_file(o.op)), tol.symmetry);
  const auto psi = io::vector_from_json(io::read_json_file(o.psi));
  const auto mode = o.project ? greenop::NullMode::project : greenop::NullMode::error;
  const auto sigma = greenop::green_apply(op, psi, mode, tol.invertibility);
  const double residual = (op.matrix() * sigma - psi).norm();
  Outcome out;
  out.result["sigma"] = io::vector_to_json(sigma);
  out.result["residual"] = residual;
  out.result["min_abs_eigenvalue"] = op.eigenvalues().cwiseAbs().minCoeff();
  out.passed = o.project || residual < 1e-10 * std::max(1.0, psi.norm());
  return out;
}

Outcome cmd_box1d(const Options& o, const Tolerances& tol, json& cfg) {
  cfg["samples"] = o.box_samples;
  cfg["speed"] = o.speed;
  cfg["periodic"] = o.periodic;
  const auto op = greenop::box_operator_1d(o.box_samples, o.speed, o.periodic);
  const int S = o.box_samples;
  const double h = 1.0 / S, pi = std::acos(-1.0);
  std::vector<double> expected;
  for (int k = 0; k < S; ++k) {
    const double angle = o.periodic ? pi * k / S : pi * k / (2.0 * S);
    const double s = std::sin(angle);
    expected.push_back(1.0 + std::pow(2.0 / (o.speed * h), 2) * s * s);
  }
  std::sort(expected.begin(), expected.end());
  double formula = 0.0;
  for (int k = 0; k < S; ++k) formula = std::max(formula, std::abs(op.eigenvalues()(k) - expected[k]) / expected[k]);
  Outcome out;
  out.result["min_eigenvalue"] = op.eigenvalues().minCoeff();
  out.result["max_eigenvalue"] = op.eigenvalues().maxCoeff();
  out.result["formula_residual"] = formula;
  out.result["symmetry_residual"] = op.symmetry_residual();
  out.passed = op.eigenvalues().minCoeff() >= 1.0 - 1e-9 && formula < 1e-9 && op.symmetry_residual() < tol.symmetry;
  return out;
}

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

std::string to_csv(const json& report, const std::string& table) {
  std::ostringstream os;
  if (!table.empty() && report.contains(table) && report[table].is_array() && !report[table].empty() &&
      report[table][0].is_object()) {
    std::vector<std::string> keys;
    for (const auto& row : report[table])
      for (const auto& [k, v] : row.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(keys[i]);
    os << "\n";
    for (const auto& row : report[table]) {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        os << (i ? "," : "") << (row.contains(keys[i]) ? csv_cell(row[keys[i]]) : std::string());
      }
      os << "\n";
    }
    return os.str();
  }
  os << "key,value\n";
  const json flat = report.flatten();
  for (const auto& [k, v] : flat.items()) os << csv_cell(k) << "," << csv_cell(v) << "\n";
  return os.str();
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "tolerance override name=value (repeatable)");
  sub->add_option("--out", o.out, "write the report to this file");
  sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularized traces, focal radii, transport and Green operators at finite truncation", "focalis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto* trace = app.add_subcommand("trace", "regularized, zeta and square traces of a spectrum");
  trace->add_option("--spec", o.spec, "spectrum JSON")->required();
  trace->add_flag("--zeta", o.zeta, "also compute the zeta trace");
  trace->add_flag("--square", o.square, "also report the trace of the square");
  trace->add_flag("--accelerate", o.accelerate, "Richardson extrapolation of the partial sums");

  auto* focal_cmd = app.add_subcommand("focal", "focal radii of an eigen grid");
  focal_cmd->add_option("--grid", o.grid, "eigen grid JSON")->required();
  focal_cmd->add_option("--window", o.window, "search window a,b")->required();
  focal_cmd->add_flag("--negative", o.negative, "search negative radii in [-b, -a]");

  auto* parallel = app.add_subcommand("parallel", "shape operator of the parallel submanifold at distance r");
  parallel->add_option("--grid", o.grid, "eigen grid JSON")->required();
  parallel->add_option("--r", o.r, "distance")->required();

  auto* check = app.add_subcommand("check", "weakly isoparametric / isoparametric / equifocal checks");
  check->add_option("mode", o.mode, "weak | iso | equifocal")->required()->check(CLI::IsMember({"weak", "iso", "equifocal"}));
  check->add_option("--grids", o.grids, "directory of eigen grid JSON files")->required();
  check->add_option("--window", o.window, "search window a,b (equifocal)");
  check->add_flag("--negative", o.negative, "search negative radii");
  check->add_option("--radii", o.radii, "radii r1,r2,... (iso)");

  auto* ex41 = app.add_subcommand("example41", "verification of the product-of-spheres example");
  ex41->add_option("--config", o.config, "model config JSON (default: built-in)");
  ex41->add_option("--points", o.points, "number of sample points")->check(CLI::PositiveNumber);
  ex41->add_option("--seed", o.seed, "random seed");
  ex41->add_option("--radii", o.radii, "parallel distances r1,r2,...");
  ex41->add_option("--window", o.window, "focal search window a,b");
  ex41->add_option("--report", o.out, "write the report to this file");

  auto* transport = app.add_subcommand("transport", "parallel transport map of a sampled algebra path");
  transport->add_option("--path", o.path, "path JSON")->required();
  transport->add_option("--steps", o.steps, "integration steps");

  auto* holonomy = app.add_subcommand("holonomy", "holonomy element relative to a reference connection");
  holonomy->add_option("--omega", o.omega, "connection path JSON")->required();
  holonomy->add_option("--omega0", o.omega0, "reference connection path JSON")->required();
  holonomy->add_option("--steps", o.steps, "integration steps (multiple of the interval count)");

  auto* roots = app.add_subcommand("roots", "restricted root decomposition of a symmetric pair");
  roots->add_option("--algebra", o.algebra, "su2 | so3 | su3 | soN")->required();
  roots->add_option("--theta", o.theta, "conj | u1diag | diag:p | id")->required();
  roots->add_option("--seed", o.seed, "seed for generic elements");

  auto* hyper = app.add_subcommand("hyperpolar", "section orthogonality of K1 x K2 acting on G");
  hyper->add_option("--group", o.group, "SU2 | SO3 | SU3")->required();
  hyper->add_option("--k1", o.k1, "involution defining K1")->required();
  hyper->add_option("--k2", o.k2, "involution defining K2")->required();
  hyper->add_option("--samples", o.samples, "points of the section")->check(CLI::PositiveNumber);
  hyper->add_option("--seed", o.seed, "random seed");

  auto* green = app.add_subcommand("green", "apply the Green operator");
  green->add_option("--op", o.op, "symmetric matrix JSON")->required();
  green->add_option("--psi", o.psi, "right-hand side vector JSON")->required();
  green->add_flag("--project", o.project, "project out near-null directions instead of failing");

  auto* box = app.add_subcommand("box1d", "one-dimensional operator id - (1/a^2) d^2/dt^2");
  box->add_option("--samples", o.box_samples, "sample count S >= 4")->required();
  box->add_option("--speed", o.speed, "speed a > 0")->required();
  box->add_flag("--periodic", o.periodic, "periodic instead of Neumann boundary");

  for (auto* sub : {trace, focal_cmd, parallel, check, ex41, transport, holonomy, roots, hyper, green, box}) {
    add_common(sub, o);
  }
  ex41->get_option("--out")->excludes(ex41->get_option("--report"));

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
    if (std::none_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == name; })) {
      err << "error: unknown command '" << name << "'\n";
      return 2;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    Tolerances tol;
    for (const auto& t : o.tol) tol.set(t);
    json cfg = json::object();
    Outcome outcome;
    if (command == "trace") outcome = cmd_trace(o, tol, cfg);
    else if (command == "focal") outcome = cmd_focal(o, tol, cfg);
    else if (command == "parallel") outcome = cmd_parallel(o, tol, cfg);
    else if (command == "check") outcome = cmd_check(o, tol, cfg);
    else if (command == "example41") outcome = cmd_example41(o, tol, cfg);
    else if (command == "transport") outcome = cmd_transport(o, tol, cfg);
    else if (command == "holonomy") outcome = cmd_holonomy(o, tol, cfg);
    else if (command == "roots") outcome = cmd_roots(o, tol, cfg);
    else if (command == "hyperpolar") outcome = cmd_hyperpolar(o, tol, cfg);
    else if (command == "green") outcome = cmd_green(o, tol, cfg);
    else outcome = cmd_box1d(o, tol, cfg);

    cfg["tolerances"] = tolerance_json(tol);
    cfg["format"] = o.format;
    json report = outcome.result;
    report["schema"] = 1;
    report["tool"] = "focalis";
    report["version"] = std::string(kVersion);
    report["command"] = command;
    report["config"] = cfg;
    report["passed"] = outcome.passed;

    const std::string text = o.format == "csv" ? to_csv(report, outcome.table) : report.dump(2) + "\n";
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) {
        err << "error: cannot write report to '" << o.out << "'\n";
        return 2;
      }
      file << text;
    }
    return outcome.passed ? 0 : 1;
  } catch (const ValidationError& e) {
    err << "error: invalid input: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << "\n";
  } catch (const SingularOperator& e) {
    err << "error: singular operator: " << e.what() << "\n";
  } catch (const OracleUndefined& e) {
    err << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace focalis::cli
