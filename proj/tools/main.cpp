#include "run.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Hybrid finite volume advection-diffusion solver"};
  app.require_subcommand(1);

  std::string config_path;
  hfv::cli::Overrides overrides;
  std::string out, mesh_file, scheme, flux;
  double eta = 0, dt = 0, tf = 0;

  for (const char* name : {"stationary", "transient", "converge", "longtime", "positivity"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--mesh-file", mesh_file, "polygonal mesh file");
    sub->add_option("--scheme", scheme, "hmm|expfit|expfit-harmonic|nonlinear");
    sub->add_option("--flux", flux, "centred|upwind|sg");
    sub->add_option("--eta", eta, "stabilisation parameter");
    sub->add_option("--dt", dt, "time step");
    sub->add_option("--tf", tf, "final time");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  auto given = [sub](const char* flag) { return sub->count(flag) > 0; };
  if (given("--out")) overrides.output_directory = out;
  if (given("--mesh-file")) overrides.mesh_file = mesh_file;
  if (given("--scheme")) overrides.scheme = scheme;
  if (given("--flux")) overrides.flux = flux;
  if (given("--eta")) overrides.eta = eta;
  if (given("--dt")) overrides.dt = dt;
  if (given("--tf")) overrides.final_time = tf;

  try {
    hfv::cli::RunConfig config = hfv::cli::load_config(config_path);
    config.command = hfv::cli::parse_command(sub->get_name());
    hfv::cli::apply_overrides(config, overrides);
    hfv::cli::run(config);
  } catch (const std::exception& e) {
    const int code = hfv::cli::exit_code_for(e);
    std::cerr << "error code=" << code << " message=\"" << e.what() << "\"\n";
    return code;
  }
  return 0;
}
