#include "run.hpp"

#include "hfv/output.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace hfv::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!object.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : object.items())
    if (!keys.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

template <class T>
T get(const json& object, const char* key, const std::string& where) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

double get_number(const json& object, const char* key, const std::string& where) {
  if (!object.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return object.at(key).get<double>();
}

double get_positive(const json& object, const char* key, const std::string& where) {
  const double v = get_number(object, key, where);
  if (!(v > 0) || !std::isfinite(v)) throw ConfigError(where + "." + key + ": must be positive");
  return v;
}

int get_int(const json& object, const char* key, const std::string& where, int min_value) {
  const auto& v = object.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  const int i = v.get<int>();
  if (i < min_value) throw ConfigError(where + "." + key + ": must be >= " + std::to_string(min_value));
  return i;
}

template <class F>
auto parse_name(F parse, const std::string& value, const std::string& where) {
  try {
    return parse(value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

MeshSpec parse_mesh(const json& j) {
  reject_unknown(j, "mesh", {"family", "resolution", "levels", "parameter", "file"});
  MeshSpec m;
  if (j.contains("file")) m.file = get<std::string>(j, "file", "mesh");
  if (j.contains("family"))
    m.family = parse_name(parse_mesh_family, get<std::string>(j, "family", "mesh"), "mesh.family");
  else if (m.file.empty())
    throw ConfigError("mesh: needs 'family' or 'file'");
  if (j.contains("resolution")) m.resolution = get_int(j, "resolution", "mesh", 1);
  if (j.contains("levels")) m.levels = get_int(j, "levels", "mesh", 1);
  if (j.contains("parameter")) m.parameter = get_number(j, "parameter", "mesh");
  return m;
}

NewtonOptions parse_newton(const json& j) {
  reject_unknown(j, "scheme.newton", {"epsilon", "tolerance", "max_iterations", "max_backtracks"});
  NewtonOptions n;
  if (j.contains("epsilon")) n.epsilon = get_positive(j, "epsilon", "scheme.newton");
  if (j.contains("tolerance")) n.tolerance = get_positive(j, "tolerance", "scheme.newton");
  if (j.contains("max_iterations")) n.max_iterations = get_int(j, "max_iterations", "scheme.newton", 1);
  if (j.contains("max_backtracks")) n.max_backtracks = get_int(j, "max_backtracks", "scheme.newton", 0);
  return n;
}

SchemeConfig parse_scheme(const json& j) {
  reject_unknown(j, "scheme", {"kind", "flux", "eta", "dt", "final_time", "mean", "aggregate", "newton"});
  SchemeConfig s;
  if (j.contains("kind")) s.scheme = parse_name(parse_scheme_kind, get<std::string>(j, "kind", "scheme"), "scheme.kind");
  if (j.contains("flux")) s.flux = parse_name(parse_flux_kind, get<std::string>(j, "flux", "scheme"), "scheme.flux");
  if (j.contains("eta")) s.eta = get_positive(j, "eta", "scheme");
  if (j.contains("dt")) s.dt = get_positive(j, "dt", "scheme");
  if (j.contains("final_time")) {
    s.final_time = get_number(j, "final_time", "scheme");
    if (!(s.final_time >= 0)) throw ConfigError("scheme.final_time: must be >= 0");
  }
  if (j.contains("mean")) s.mean = parse_name(parse_mean_kind, get<std::string>(j, "mean", "scheme"), "scheme.mean");
  if (j.contains("aggregate"))
    s.aggregate = parse_name(parse_aggregate_kind, get<std::string>(j, "aggregate", "scheme"), "scheme.aggregate");
  if (j.contains("newton")) s.newton = parse_newton(j.at("newton"));
  return s;
}

Vec2 parse_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + ": expected [a, b]");
  return {j[0].get<double>(), j[1].get<double>()};
}

InlineProblem parse_inline(const json& j) {
  const std::string w = "problem";
  reject_unknown(j, w, {"diffusion", "potential_gradient", "source", "dirichlet", "neumann", "initial", "dirichlet_sides"});
  InlineProblem p;
  if (j.contains("diffusion")) {
    const json& d = j.at("diffusion");
    if (!d.is_array() || d.size() != 2) throw ConfigError(w + ".diffusion: expected [[a, b], [c, d]]");
    p.diffusion.row(0) = parse_vec(d[0], w + ".diffusion").transpose();
    p.diffusion.row(1) = parse_vec(d[1], w + ".diffusion").transpose();
    if (std::abs(p.diffusion(0, 1) - p.diffusion(1, 0)) > 1e-14 * p.diffusion.norm())
      throw ConfigError(w + ".diffusion: must be symmetric");
    if (!(p.diffusion.determinant() > 0 && p.diffusion(0, 0) > 0))
      throw ConfigError(w + ".diffusion: must be positive definite");
  }
  if (j.contains("potential_gradient")) p.potential_gradient = parse_vec(j.at("potential_gradient"), w + ".potential_gradient");
  if (j.contains("source")) p.source = get_number(j, "source", w);
  if (j.contains("dirichlet")) p.dirichlet = get_number(j, "dirichlet", w);
  if (j.contains("neumann")) p.neumann = get_number(j, "neumann", w);
  if (j.contains("initial")) p.initial = get_number(j, "initial", w);
  if (j.contains("dirichlet_sides")) {
    const json& s = j.at("dirichlet_sides");
    if (!s.is_array()) throw ConfigError(w + ".dirichlet_sides: expected an array");
    for (const auto& side : s) {
      if (!side.is_string()) throw ConfigError(w + ".dirichlet_sides: expected strings");
      const auto name = side.get<std::string>();
      if (name != "left" && name != "right" && name != "bottom" && name != "top")
        throw ConfigError(w + ".dirichlet_sides: unknown side '" + name + "'");
      p.dirichlet_sides.push_back(name);
    }
  }
  return p;
}

std::string csv_int(long v) { return std::to_string(v); }

void write_key_values(const std::string& path, const std::vector<std::pair<std::string, double>>& rows) {
  CsvTable table({"quantity", "value"});
  for (const auto& [k, v] : rows) table.add_row({k, format_real(v)});
  write_file_atomic(path, table.str());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string vtk_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "solution_%04d.vtk", index);
  return buf;
}

double positivity_shift(const RunConfig& config, const TestCase& tc) {
  if (config.scheme.scheme != SchemeKind::nonlinear) return 0.0;
  const auto it = tc.constants.find("positivity_shift");
  return it == tc.constants.end() ? 0.0 : it->second;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "stationary") return Command::stationary;
  if (name == "transient") return Command::transient;
  if (name == "converge") return Command::converge;
  if (name == "longtime") return Command::longtime;
  if (name == "positivity") return Command::positivity;
  throw ConfigError("unknown command '" + name + "'");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::stationary: return "stationary";
    case Command::transient: return "transient";
    case Command::converge: return "converge";
    case Command::longtime: return "longtime";
    case Command::positivity: return "positivity";
  }
  return "?";
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(j, "config", {"command", "case", "problem", "mesh", "scheme", "output", "seed"});
  RunConfig c;
  if (j.contains("command")) c.command = parse_command(get<std::string>(j, "command", "config"));
  if (j.contains("case") == j.contains("problem")) throw ConfigError("config: exactly one of 'case' or 'problem' is required");
  if (j.contains("case")) {
    c.case_name = get<std::string>(j, "case", "config");
    try {
      (void)test_case_by_name(c.case_name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.case: ") + e.what());
    }
  } else {
    c.inline_problem = parse_inline(j.at("problem"));
  }
  if (!j.contains("mesh")) throw ConfigError("config: 'mesh' is required");
  c.mesh = parse_mesh(j.at("mesh"));
  if (j.contains("scheme")) c.scheme = parse_scheme(j.at("scheme"));
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, "output", {"directory", "vtk"});
    if (o.contains("directory")) c.output_directory = get<std::string>(o, "directory", "output");
    if (o.contains("vtk")) c.vtk = get<bool>(o, "vtk", "output");
  }
  if (j.contains("seed")) c.seed = static_cast<unsigned>(get_int(j, "seed", "config", 0));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_overrides(RunConfig& config, const Overrides& o) {
  if (o.output_directory) config.output_directory = *o.output_directory;
  if (o.mesh_file) config.mesh.file = *o.mesh_file;
  if (o.scheme) config.scheme.scheme = parse_name(parse_scheme_kind, *o.scheme, "--scheme");
  if (o.flux) config.scheme.flux = parse_name(parse_flux_kind, *o.flux, "--flux");
  if (o.eta) {
    if (!(*o.eta > 0)) throw ConfigError("--eta: must be positive");
    config.scheme.eta = *o.eta;
  }
  if (o.dt) {
    if (!(*o.dt > 0)) throw ConfigError("--dt: must be positive");
    config.scheme.dt = *o.dt;
  }
  if (o.final_time) {
    if (!(*o.final_time >= 0)) throw ConfigError("--tf: must be >= 0");
    config.scheme.final_time = *o.final_time;
  }
}

TestCase resolve_case(const RunConfig& config) {
  if (!config.inline_problem) return test_case_by_name(config.case_name);
  const InlineProblem& p = *config.inline_problem;
  TestCase tc;
  tc.name = "inline";
  const Mat2 lambda = p.diffusion;
  const Vec2 g = p.potential_gradient;
  tc.data.diffusion = DiffusionTensor::constant(lambda);
  tc.data.potential = [g](const Vec2& x) { return g.dot(x); };
  tc.data.potential_gradient = [g](const Vec2&) { return g; };
  const double f = p.source, gd = p.dirichlet, gn = p.neumann, u0 = p.initial;
  tc.data.source = [f](const Vec2&) { return f; };
  tc.data.dirichlet = [gd](const Vec2&) { return gd; };
  tc.data.neumann = [gn](const Vec2&) { return gn; };
  tc.data.initial = [u0](const Vec2&) { return u0; };
  tc.data.mass = u0;  // unit square
  for (const auto& side : p.dirichlet_sides) {
    if (side == "left") tc.dirichlet.push_back(BoundaryPredicate::line_x(0.0));
    if (side == "right") tc.dirichlet.push_back(BoundaryPredicate::line_x(1.0));
    if (side == "bottom") tc.dirichlet.push_back(BoundaryPredicate::line_y(0.0));
    if (side == "top") tc.dirichlet.push_back(BoundaryPredicate::line_y(1.0));
  }
  return tc;
}

Mesh build_mesh(const RunConfig& config, const TestCase& tc, int level) {
  if (!config.mesh.file.empty()) return tag_boundary(read_polymesh_file(config.mesh.file), tc.dirichlet);
  const int n = config.mesh.resolution << level;
  try {
    return tag_boundary(generate_mesh(config.mesh.family, n, config.mesh.parameter), tc.dirichlet);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mesh: ") + e.what());
  }
}

StationaryOutcome run_stationary(const RunConfig& config, const TestCase& tc, const Mesh& mesh) {
  const double shift = positivity_shift(config, tc);
  const TestCase used = shift != 0.0 ? shift_solution(tc, shift) : tc;
  StationaryOutcome out;
  out.solution = solve_stationary(mesh, used.data, config.scheme);
  if (shift != 0.0) out.solution = out.solution.map([shift](double v) { return v - shift; });
  if (tc.exact_steady) out.errors = discretization_errors(mesh, out.solution, tc.exact_steady);
  return out;
}

std::vector<ConvergenceRow> run_converge(const RunConfig& config) {
  const TestCase tc = resolve_case(config);
  if (!tc.exact_steady) throw ConfigError("converge: the case has no exact steady solution");
  if (!config.mesh.file.empty()) throw ConfigError("converge: needs a mesh family, not a file");
  std::vector<ConvergenceRow> rows;
  for (int level = 0; level < config.mesh.levels; ++level) {
    const Mesh mesh = build_mesh(config, tc, level);
    rows.push_back(*run_stationary(config, tc, mesh).errors);
  }
  fill_orders(rows);
  return rows;
}

TransientResult run_transient(const RunConfig& config, const TestCase& tc, const Mesh& mesh) {
  TransientOptions options;
  options.exact_steady = tc.exact_steady;
  options.initial_refinement = tc.initial_refinement;
  if (config.vtk) {
    const std::string dir = config.output_directory;
    options.observer = [&mesh, dir](const TimeSeriesRecord& r, const DofVector& u) {
      export_vtk(mesh, u, join(dir, vtk_name(r.step)));
    };
  }
  return transient_drive(mesh, tc.data, config.scheme, options);
}

void run(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_directory, ec);
  if (ec) throw IoError("cannot create output directory '" + config.output_directory + "': " + ec.message());
  const std::string dir = config.output_directory;
  const TestCase tc = resolve_case(config);

  if (config.command == Command::converge) {
    const auto rows = run_converge(config);
    CsvTable table({"level", "resolution", "h", "l2_error", "h1_error", "l2_order", "h1_order"});
    for (std::size_t i = 0; i < rows.size(); ++i)
      table.add_row({csv_int(static_cast<long>(i + 1)), csv_int(static_cast<long>(config.mesh.resolution) << i),
                     format_real(rows[i].h), format_real(rows[i].l2_error), format_real(rows[i].h1_error),
                     format_real(rows[i].l2_order), format_real(rows[i].h1_order)});
    write_file_atomic(join(dir, "summary.csv"), table.str());
    return;
  }

  const Mesh mesh = build_mesh(config, tc);
  if (config.command == Command::stationary) {
    const auto out = run_stationary(config, tc, mesh);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    write_key_values(join(dir, "summary.csv"),
                     {{"cells", static_cast<double>(mesh.num_cells())},
                      {"faces", static_cast<double>(mesh.num_faces())},
                      {"h", mesh.meshsize_tilde()},
                      {"l2_error", out.errors ? out.errors->l2_error : nan},
                      {"h1_error", out.errors ? out.errors->h1_error : nan},
                      {"min_cell", out.solution.cells.minCoeff()},
                      {"min_face", out.solution.faces.minCoeff()}});
    if (config.vtk) export_vtk(mesh, out.solution, join(dir, vtk_name(0)));
    return;
  }

  const TransientResult result = run_transient(config, tc, mesh);
  write_file_atomic(join(dir, "series.csv"), series_table(result.records).str());
  const PositivityReport pos = positivity_report(result.records);
  std::vector<std::pair<std::string, double>> summary = {
      {"steps", static_cast<double>(result.records.size() - 1)},
      {"halvings", static_cast<double>(result.halvings)},
      {"min_cells", pos.min_cells},
      {"min_faces", pos.min_faces},
      {"negatives_count", static_cast<double>(pos.negatives_count)},
      {"cost", static_cast<double>(pos.cost)}};
  if (config.command == Command::longtime) {
    const std::pair<const char*, DistanceKind> kinds[] = {{"l1_exact", DistanceKind::l1_exact},
                                                          {"l1_discrete", DistanceKind::l1_discrete},
                                                          {"l2", DistanceKind::l2}};
    for (const auto& [name, kind] : kinds) {
      if (kind == DistanceKind::l1_exact && !tc.exact_steady) continue;
      try {
        const DecayFit fit = decay_rate(result.records, kind);
        summary.push_back({std::string("rate_") + name, fit.rate});
        summary.push_back({std::string("plateau_") + name, fit.plateau});
      } catch (const DomainError&) {
        summary.push_back({std::string("rate_") + name, std::numeric_limits<double>::quiet_NaN()});
      }
    }
  }
  write_key_values(join(dir, "summary.csv"), summary);
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error)) return 2;
  if (dynamic_cast<const MeshError*>(&error)) return 3;
  if (dynamic_cast<const SolverError*>(&error) || dynamic_cast<const DomainError*>(&error)) return 4;
  if (dynamic_cast<const IoError*>(&error)) return 5;
  if (dynamic_cast<const std::invalid_argument*>(&error)) return 2;
  return 1;
}

}  // namespace hfv::cli
