#ifndef PHFEM_SCENARIO_HPP
#define PHFEM_SCENARIO_HPP

#include "phfem/integrator.hpp"
#include "phfem/ph_system.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace phfem {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Configuration of one simulation run. All quantities are SI. The JSON
// form is strict: unknown keys are rejected and a schema_version field is
// required.
struct ScenarioConfig {
  int schema_version = 1;
  std::string scenario = "custom";  // rod | beam | beam_linear | custom

  // geometry + mesh (1D rod: L/elements; 2D beam: Lx, Ly/nx, ny)
  double L = 0.0;
  double Lx = 0.0, Ly = 0.0;
  int elements = 0;
  int nx = 0, ny = 0;

  // material (rod: rho0 [kg/m], E [N/m^2], A [m^2]; beam: rho0 [kg/m^3],
  // Lame parameters [N/m^2], plane stress with unit thickness)
  double rho0 = 0.0;
  double E = 0.0, A = 0.0;
  double lambda = 0.0, mu = 0.0;

  // polynomial degrees (velocity continuous, stress/defgrad discontinuous)
  int velocity_degree = 1;
  int stress_degree = 1;
  int defgrad_degree = 0;

  double dt = 1e-3;
  double t_end = 1.0;

  double newton_tol = 1e-10;
  int max_newton_iter = 15;
  std::string jacobian = "analytic";

  Signal nu, tau;

  Eigen::VectorXd probe;   // displacement probe (beam tip by default)

  std::string out_dir = "out";
  int vtk_every = 0;       // 0 disables field output
  bool dump_matrices = false;

  int dim() const { return L > 0.0 ? 1 : 2; }

  static ScenarioConfig rod_default();
  static ScenarioConfig beam_default(bool linear = false);

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static ScenarioConfig load(const std::string& path);

  void validate() const;
};

// Choose beam subdivisions with the domain aspect ratio so that the
// triangle count lands near `n` (e.g. 1250 -> 125 x 5 on the 25 x 1 beam).
void apply_element_count(ScenarioConfig& config, int n);

struct ScenarioSetup {
  PHSystem system;
  State initial;
  IntegratorConfig integrator;
};

ScenarioSetup build_scenario(const ScenarioConfig& config);

struct ScenarioResult {
  Trajectory trajectory;
  std::vector<std::string> files;
};

// Run the configured scenario and emit its artifacts (hamiltonian.csv,
// solver_stats.csv, boundary.csv for the rod, tip_displacement.csv and a
// VTK series for the beam) into config.out_dir.
ScenarioResult run_scenario(const ScenarioConfig& config);

ScenarioResult run_rod(const ScenarioConfig& config);
ScenarioResult run_beam(const ScenarioConfig& config);

}  // namespace phfem

#endif
