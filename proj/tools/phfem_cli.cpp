// Command-line front end: reproduces the rod and beam benchmarks, runs
// arbitrary JSON configurations and prints default configs.

#include "phfem/scenario.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <iostream>

namespace {

struct CommonFlags {
  int elements = 0;
  double dt = 0.0;
  double t_end = -1.0;
  double newton_tol = 0.0;
  int vtk_every = -1;
  std::string out_dir;
  bool dump_matrices = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--elements", f.elements, "Element count (beam: matched via aspect ratio)");
  cmd->add_option("--dt", f.dt, "Time step [s]");
  cmd->add_option("--t-end", f.t_end, "Simulation horizon [s]");
  cmd->add_option("--newton-tol", f.newton_tol, "Newton residual tolerance");
  cmd->add_option("--vtk-every", f.vtk_every, "Write a VTK frame every k-th step (0 = off)");
  cmd->add_option("--out", f.out_dir, "Output directory");
  cmd->add_flag("--dump-matrices", f.dump_matrices, "Export operators in Matrix Market format");
}

void apply_common_flags(phfem::ScenarioConfig& config, const CommonFlags& f) {
  if (f.elements > 0) phfem::apply_element_count(config, f.elements);
  if (f.dt > 0.0) config.dt = f.dt;
  if (f.t_end >= 0.0) config.t_end = f.t_end;
  if (f.newton_tol > 0.0) config.newton_tol = f.newton_tol;
  if (f.vtk_every >= 0) config.vtk_every = f.vtk_every;
  if (!f.out_dir.empty()) config.out_dir = f.out_dir;
  if (f.dump_matrices) config.dump_matrices = true;
  config.validate();
}

int execute(const phfem::ScenarioConfig& config) {
  const phfem::ScenarioResult result = phfem::run_scenario(config);
  const auto& H = result.trajectory.H;
  std::cout << "completed " << result.trajectory.steps() << " steps, H(t_end) = " << H.back()
            << " J\n";
  for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite-element simulator for geometrically nonlinear elastodynamics "
               "in port-Hamiltonian form"};
  app.require_subcommand(1);

  CommonFlags rod_flags, beam_flags;
  bool beam_linear = false;
  std::string config_path, dump_name;

  CLI::App* rod = app.add_subcommand("rod", "Nonlinear rod benchmark (1D)");
  add_common_flags(rod, rod_flags);

  CLI::App* beam = app.add_subcommand("beam", "Nonlinear beam benchmark (2D plane stress)");
  beam->add_flag("--linear", beam_linear, "Use the frozen-linear comparison model");
  add_common_flags(beam, beam_flags);

  CLI::App* run_cmd = app.add_subcommand("run", "Run a JSON configuration file");
  run_cmd->add_option("config", config_path, "Path to the configuration file")->required();

  CLI::App* dump = app.add_subcommand("dump-config", "Print a default configuration");
  dump->add_option("scenario", dump_name, "rod | beam | beam_linear")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (rod->parsed()) {
      phfem::ScenarioConfig config = phfem::ScenarioConfig::rod_default();
      apply_common_flags(config, rod_flags);
      return execute(config);
    }
    if (beam->parsed()) {
      phfem::ScenarioConfig config = phfem::ScenarioConfig::beam_default(beam_linear);
      apply_common_flags(config, beam_flags);
      return execute(config);
    }
    if (run_cmd->parsed()) {
      return execute(phfem::ScenarioConfig::load(config_path));
    }
    if (dump->parsed()) {
      phfem::ScenarioConfig config;
      if (dump_name == "rod")
        config = phfem::ScenarioConfig::rod_default();
      else if (dump_name == "beam")
        config = phfem::ScenarioConfig::beam_default(false);
      else if (dump_name == "beam_linear")
        config = phfem::ScenarioConfig::beam_default(true);
      else
        throw phfem::ConfigError("unknown scenario '" + dump_name + "'");
      std::cout << config.to_json().dump(2) << "\n";
      return 0;
    }
  } catch (const phfem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const phfem::SolverError& e) {
    std::cerr << "solver failure at step " << e.step_index << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
