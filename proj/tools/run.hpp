#ifndef HFV_TOOLS_RUN_HPP
#define HFV_TOOLS_RUN_HPP

#include "hfv/experiments.hpp"
#include "hfv/transient.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfv::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { stationary, transient, converge, longtime, positivity };

Command parse_command(const std::string& name);
std::string to_string(Command command);

struct MeshSpec {
  MeshFamily family = MeshFamily::cartesian;
  int resolution = 8;
  int levels = 1;  ///< converge: resolution doubles per level
  std::optional<double> parameter;
  std::string file;  ///< overrides the family when non-empty
};

/// Spatially constant coefficients with a linear potential φ(x) = g·x.
struct InlineProblem {
  Mat2 diffusion = Mat2::Identity();
  Vec2 potential_gradient = Vec2::Zero();
  double source = 0.0;
  double dirichlet = 0.0;
  double neumann = 0.0;
  double initial = 1.0;
  std::vector<std::string> dirichlet_sides;  ///< subset of left/right/bottom/top
};

struct RunConfig {
  Command command = Command::stationary;
  std::string case_name;  ///< empty when `inline_problem` is set
  std::optional<InlineProblem> inline_problem;
  MeshSpec mesh;
  SchemeConfig scheme;
  std::string output_directory = ".";
  bool vtk = false;
  unsigned seed = 0;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::string> output_directory;
  std::optional<std::string> mesh_file;
  std::optional<std::string> scheme;
  std::optional<std::string> flux;
  std::optional<double> eta;
  std::optional<double> dt;
  std::optional<double> final_time;
};

/// Validates and converts a JSON document; unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& config, const Overrides& overrides);

TestCase resolve_case(const RunConfig& config);
/// Tagged mesh at a convergence level (0-based).
Mesh build_mesh(const RunConfig& config, const TestCase& tc, int level = 0);

struct StationaryOutcome {
  DofVector solution;
  std::optional<ConvergenceRow> errors;
};

StationaryOutcome run_stationary(const RunConfig& config, const TestCase& tc, const Mesh& mesh);
std::vector<ConvergenceRow> run_converge(const RunConfig& config);
TransientResult run_transient(const RunConfig& config, const TestCase& tc, const Mesh& mesh);

/// Runs the configured command and writes series.csv / summary.csv (and VTK
/// files when requested) under the output directory.
void run(const RunConfig& config);

/// Exit codes: 2 config, 3 mesh, 4 solver, 5 I/O.
int exit_code_for(const std::exception& error);

}  // namespace hfv::cli

#endif
