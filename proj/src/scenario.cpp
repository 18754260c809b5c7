#include "phfem/scenario.hpp"

#include "phfem/io.hpp"

#include <nlohmann/json.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace phfem {

using nlohmann::json;

ScenarioConfig ScenarioConfig::rod_default() {
  ScenarioConfig c;
  c.scenario = "rod";
  c.L = 3.0;
  c.elements = 100;
  c.rho0 = 7.850;          // kg/m
  c.E = 1000.0e6;          // 1000 N/mm^2
  c.A = 100.0e-6;          // 100 mm^2
  c.velocity_degree = 2;
  c.stress_degree = 2;
  c.defgrad_degree = 1;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.nu = Signal::ramp_down(Eigen::VectorXd::Constant(1, 0.5), 0.2);
  c.tau = Signal::hold(Eigen::VectorXd::Constant(1, 100.0), 0.2);
  c.probe = Eigen::VectorXd::Constant(1, 3.0);
  c.out_dir = "out/rod";
  c.vtk_every = 0;
  return c;
}

ScenarioConfig ScenarioConfig::beam_default(bool linear) {
  ScenarioConfig c;
  c.scenario = linear ? "beam_linear" : "beam";
  c.Lx = 25.0;
  c.Ly = 1.0;
  c.nx = 125;
  c.ny = 5;
  c.rho0 = 1.02e-4;        // kg/m^3, unit thickness
  c.lambda = 329.67;       // N/m^2
  c.mu = 384.62;           // N/m^2
  c.velocity_degree = 1;
  c.stress_degree = 1;
  c.defgrad_degree = 0;
  c.dt = 1e-3;
  c.t_end = 4.0;
  c.nu = Signal::zero(2);
  Eigen::VectorXd tip(2);
  tip << 0.0, 0.1;
  c.tau = Signal::ramp_up(tip, 1.0);
  Eigen::VectorXd probe(2);
  probe << 25.0, 0.0;
  c.probe = probe;
  c.out_dir = linear ? "out/beam_linear" : "out/beam";
  c.vtk_every = 20;
  return c;
}

void apply_element_count(ScenarioConfig& config, int n) {
  if (n < 1) throw ConfigError("element count must be positive");
  if (config.dim() == 1) {
    config.elements = n;
  } else {
    const double aspect = config.Lx / config.Ly;
    const int ny = std::max(1, static_cast<int>(std::lround(std::sqrt(n / (2.0 * aspect)))));
    config.nx = std::max(1, static_cast<int>(std::lround(aspect * ny)));
    config.ny = ny;
  }
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

Eigen::VectorXd parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + " must be an array of numbers");
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Signal parse_signal(const json& j, int dim, const std::string& where) {
  check_keys(j, {"kind", "value", "t_off"}, where);
  if (!j.contains("kind")) throw ConfigError(where + ": missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  Eigen::VectorXd value = j.contains("value") ? parse_vector(j.at("value"), where + ".value")
                                              : Eigen::VectorXd::Zero(dim);
  if (value.size() != dim)
    throw ConfigError(where + ": value must have " + std::to_string(dim) + " components");
  const double t_off = j.value("t_off", 0.0);

  if (kind == "zero") return Signal::zero(dim);
  if (kind == "constant") return Signal::constant(value);
  if (kind == "hold") return Signal::hold(value, t_off);
  if (kind == "ramp_down") return Signal::ramp_down(value, t_off);
  if (kind == "ramp_up") return Signal::ramp_up(value, t_off);
  throw ConfigError(where + ": unknown signal kind '" + kind + "'");
}

json signal_to_json(const Signal& s) {
  json j;
  switch (s.kind) {
    case Signal::Kind::Zero: j["kind"] = "zero"; break;
    case Signal::Kind::Constant: j["kind"] = "constant"; break;
    case Signal::Kind::Hold: j["kind"] = "hold"; break;
    case Signal::Kind::RampDown: j["kind"] = "ramp_down"; break;
    case Signal::Kind::RampUp: j["kind"] = "ramp_up"; break;
  }
  j["value"] = vector_to_json(s.value);
  if (s.kind == Signal::Kind::Hold || s.kind == Signal::Kind::RampDown ||
      s.kind == Signal::Kind::RampUp)
    j["t_off"] = s.t_off;
  return j;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j,
             {"schema_version", "scenario", "geometry", "mesh", "material", "spaces", "time",
              "solver", "inputs", "probe", "output"},
             "config");
  if (!j.contains("schema_version")) throw ConfigError("missing schema_version");
  if (j.at("schema_version").get<int>() != 1)
    throw ConfigError("unsupported schema_version (expected 1)");

  const std::string scenario = j.value("scenario", std::string("custom"));
  ScenarioConfig c;
  if (scenario == "rod")
    c = rod_default();
  else if (scenario == "beam")
    c = beam_default(false);
  else if (scenario == "beam_linear")
    c = beam_default(true);
  else if (scenario == "custom")
    c = ScenarioConfig{};
  else
    throw ConfigError("unknown scenario '" + scenario + "'");
  c.scenario = scenario;

  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    check_keys(g, {"L", "Lx", "Ly"}, "geometry");
    if (g.contains("L")) {
      c.L = g.at("L").get<double>();
      c.Lx = c.Ly = 0.0;
    }
    if (g.contains("Lx")) c.Lx = g.at("Lx").get<double>();
    if (g.contains("Ly")) c.Ly = g.at("Ly").get<double>();
    if (g.contains("L") && (g.contains("Lx") || g.contains("Ly")))
      throw ConfigError("geometry: give either L or Lx/Ly");
    if (g.contains("Lx") || g.contains("Ly")) c.L = 0.0;
  }
  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    check_keys(m, {"elements", "nx", "ny"}, "mesh");
    if (m.contains("elements")) c.elements = m.at("elements").get<int>();
    if (m.contains("nx")) c.nx = m.at("nx").get<int>();
    if (m.contains("ny")) c.ny = m.at("ny").get<int>();
  }
  if (j.contains("material")) {
    const json& m = j.at("material");
    check_keys(m, {"rho0", "E", "A", "lambda", "mu"}, "material");
    if (m.contains("rho0")) c.rho0 = m.at("rho0").get<double>();
    if (m.contains("E")) c.E = m.at("E").get<double>();
    if (m.contains("A")) c.A = m.at("A").get<double>();
    if (m.contains("lambda")) c.lambda = m.at("lambda").get<double>();
    if (m.contains("mu")) c.mu = m.at("mu").get<double>();
  }
  if (j.contains("spaces")) {
    const json& s = j.at("spaces");
    check_keys(s, {"velocity_degree", "stress_degree", "defgrad_degree"}, "spaces");
    if (s.contains("velocity_degree")) c.velocity_degree = s.at("velocity_degree").get<int>();
    if (s.contains("stress_degree")) c.stress_degree = s.at("stress_degree").get<int>();
    if (s.contains("defgrad_degree")) c.defgrad_degree = s.at("defgrad_degree").get<int>();
  }
  if (j.contains("time")) {
    const json& t = j.at("time");
    check_keys(t, {"dt", "t_end"}, "time");
    if (t.contains("dt")) c.dt = t.at("dt").get<double>();
    if (t.contains("t_end")) c.t_end = t.at("t_end").get<double>();
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, {"newton_tol", "max_newton_iter", "jacobian"}, "solver");
    if (s.contains("newton_tol")) c.newton_tol = s.at("newton_tol").get<double>();
    if (s.contains("max_newton_iter")) c.max_newton_iter = s.at("max_newton_iter").get<int>();
    if (s.contains("jacobian")) c.jacobian = s.at("jacobian").get<std::string>();
  }
  if (j.contains("inputs")) {
    const json& in = j.at("inputs");
    check_keys(in, {"nu", "tau"}, "inputs");
    if (in.contains("nu")) c.nu = parse_signal(in.at("nu"), c.dim(), "inputs.nu");
    if (in.contains("tau")) c.tau = parse_signal(in.at("tau"), c.dim(), "inputs.tau");
  }
  if (j.contains("probe")) c.probe = parse_vector(j.at("probe"), "probe");
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"dir", "vtk_every", "dump_matrices"}, "output");
    if (o.contains("dir")) c.out_dir = o.at("dir").get<std::string>();
    if (o.contains("vtk_every")) c.vtk_every = o.at("vtk_every").get<int>();
    if (o.contains("dump_matrices")) c.dump_matrices = o.at("dump_matrices").get<bool>();
  }
  c.validate();
  return c;
}

json ScenarioConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["scenario"] = scenario;
  if (dim() == 1) {
    j["geometry"] = {{"L", L}};
    j["mesh"] = {{"elements", elements}};
    j["material"] = {{"rho0", rho0}, {"E", E}, {"A", A}};
  } else {
    j["geometry"] = {{"Lx", Lx}, {"Ly", Ly}};
    j["mesh"] = {{"nx", nx}, {"ny", ny}};
    j["material"] = {{"rho0", rho0}, {"lambda", lambda}, {"mu", mu}};
  }
  j["spaces"] = {{"velocity_degree", velocity_degree},
                 {"stress_degree", stress_degree},
                 {"defgrad_degree", defgrad_degree}};
  j["time"] = {{"dt", dt}, {"t_end", t_end}};
  j["solver"] = {{"newton_tol", newton_tol},
                 {"max_newton_iter", max_newton_iter},
                 {"jacobian", jacobian}};
  j["inputs"] = {{"nu", signal_to_json(nu)}, {"tau", signal_to_json(tau)}};
  j["probe"] = vector_to_json(probe);
  j["output"] = {{"dir", out_dir}, {"vtk_every", vtk_every}, {"dump_matrices", dump_matrices}};
  return j;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

void ScenarioConfig::validate() const {
  if (dim() == 1) {
    if (L <= 0.0 || elements < 1) throw ConfigError("rod geometry requires L > 0, elements >= 1");
    if (E <= 0.0 || A <= 0.0) throw ConfigError("rod material requires E > 0 and A > 0");
  } else {
    if (Lx <= 0.0 || Ly <= 0.0 || nx < 1 || ny < 1)
      throw ConfigError("beam geometry requires Lx, Ly > 0 and nx, ny >= 1");
    if (mu <= 0.0) throw ConfigError("beam material requires mu > 0");
  }
  if (rho0 <= 0.0) throw ConfigError("density rho0 must be positive");
  if (velocity_degree < 1 || velocity_degree > 2)
    throw ConfigError("velocity_degree must be 1 or 2");
  if (stress_degree < 0 || stress_degree > 2 || defgrad_degree < 0 || defgrad_degree > 2)
    throw ConfigError("stress/defgrad degrees must be in [0, 2]");
  if (dt <= 0.0 || t_end < 0.0) throw ConfigError("time requires dt > 0 and t_end >= 0");
  if (newton_tol <= 0.0 || max_newton_iter < 1) throw ConfigError("invalid solver settings");
  if (jacobian != "analytic" && jacobian != "finite_difference")
    throw ConfigError("jacobian must be 'analytic' or 'finite_difference'");
  if (nu.value.size() != dim() || tau.value.size() != dim())
    throw ConfigError("input signals must have one component per space dimension");
  if (probe.size() != 0 && probe.size() != dim())
    throw ConfigError("probe must have one coordinate per space dimension");
  if (vtk_every < 0) throw ConfigError("vtk_every must be >= 0");
}

ScenarioSetup build_scenario(const ScenarioConfig& config) {
  config.validate();
  std::shared_ptr<const Mesh> mesh;
  Material material;
  if (config.dim() == 1) {
    mesh = std::make_shared<Mesh>(interval_mesh(config.L, config.elements));
    material.rho0 = config.rho0;
    material.elasticity = voigt::Elasticity::rod(config.E * config.A);
  } else {
    mesh = std::make_shared<Mesh>(rect_tri_mesh(config.Lx, config.Ly, config.nx, config.ny));
    material.rho0 = config.rho0;
    material.elasticity = voigt::Elasticity::isotropic(config.lambda, config.mu, voigt::Dim(2));
  }
  const voigt::Dim dim(mesh->dim());

  Spaces spaces;
  spaces.velocity = std::make_shared<FunctionSpace>(
      mesh, BasisSpec{Family::CG, config.velocity_degree, dim.d()});
  spaces.stress = std::make_shared<FunctionSpace>(
      mesh, BasisSpec{Family::DG, config.stress_degree, dim.sym()});
  spaces.defgrad = std::make_shared<FunctionSpace>(
      mesh, BasisSpec{Family::DG, config.defgrad_degree, dim.grad()});

  BoundaryInput input{config.tau, config.nu};
  PHSystem system(spaces, material, input);

  State init;
  if (config.scenario == "rod") {
    // v(X, 0) = 0.5 m/s, S(X, 0) = 0
    init = system.initial_state(
        [](const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(1, 0.5); },
        [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(1); });
  } else {
    init = system.zero_state();
  }

  ScenarioSetup setup{config.scenario == "beam_linear" ? system.frozen_linear()
                                                       : std::move(system),
                      std::move(init),
                      IntegratorConfig{}};
  setup.integrator.dt = config.dt;
  setup.integrator.t_end = config.t_end;
  setup.integrator.newton_tol = config.newton_tol;
  setup.integrator.max_newton_iter = config.max_newton_iter;
  setup.integrator.jacobian_mode = config.jacobian == "analytic"
                                       ? JacobianMode::Analytic
                                       : JacobianMode::FiniteDifference;
  return setup;
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_hamiltonian_csv(const Trajectory& traj, const std::string& path,
                           std::vector<std::string>& files) {
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < traj.t.size(); ++k)
    rows.push_back({traj.t[k], traj.H[k], traj.power_in[k], traj.balance_residual[k]});
  write_csv({"t [s]", "H [J]", "power_in [W]", "balance_residual [J]"}, rows, path);
  files.push_back(path);
}

void write_solver_csv(const Trajectory& traj, const std::string& path,
                      std::vector<std::string>& files) {
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < traj.t.size(); ++k)
    rows.push_back({traj.t[k], static_cast<double>(traj.newton_iterations[k]),
                    traj.final_residual[k], traj.residual_ratio[k]});
  write_csv({"t [s]", "newton_iterations [-]", "final_residual [-]", "residual_ratio [-]"}, rows,
            path);
  files.push_back(path);
}

void dump_operator_matrices(const PHSystem& system, const State& init, const std::string& dir,
                            std::vector<std::string>& files) {
  const auto& ops = system.ops();
  const std::vector<std::pair<std::string, const SparseMat*>> constant = {
      {"Mv.mtx", &ops.Mv}, {"MS.mtx", &ops.MS}, {"MF.mtx", &ops.MF},
      {"Z.mtx", &ops.Z},   {"Gtau.mtx", &ops.Gtau}};
  for (const auto& [name, mat] : constant) {
    const std::string path = join_path(dir, name);
    write_matrix_market(*mat, path);
    files.push_back(path);
  }
  const SparseMat K0 = system.K_at(init.F);
  write_matrix_market(K0, join_path(dir, "K_init.mtx"));
  files.push_back(join_path(dir, "K_init.mtx"));
  if (system.n_nu() > 0) {
    write_matrix_market(system.Gnu_at(init.F), join_path(dir, "Gnu_init.mtx"));
    files.push_back(join_path(dir, "Gnu_init.mtx"));
  }
}

// Nodal displacement/velocity plus cell-centroid stress and deformation
// gradient for one VTK frame.
void write_state_vtk(const PHSystem& system, const State& state, const std::string& path) {
  const Mesh& mesh = system.mesh();
  const int d = mesh.dim();
  const FunctionSpace& S = *system.spaces().stress;
  const FunctionSpace& F = *system.spaces().defgrad;

  VtkFields fields;
  Eigen::MatrixXd disp(mesh.node_count(), d), vel(mesh.node_count(), d);
  for (int n = 0; n < mesh.node_count(); ++n)       // vertex dofs come first
    for (int c = 0; c < d; ++c) {
      disp(n, c) = state.u(n * d + c);
      vel(n, c) = state.v(n * d + c);
    }
  fields.point_vectors.emplace_back("displacement", disp);
  fields.point_vectors.emplace_back("velocity", vel);

  Eigen::VectorXd centroid_ref =
      d == 1 ? Eigen::VectorXd::Constant(1, 0.5) : Eigen::VectorXd::Constant(2, 1.0 / 3.0);
  Eigen::MatrixXd stress(mesh.cell_count(), S.components());
  Eigen::MatrixXd defgrad(mesh.cell_count(), F.components());
  for (int c = 0; c < mesh.cell_count(); ++c) {
    stress.row(c) = S.evaluate_ref(state.S, c, centroid_ref).transpose();
    defgrad.row(c) = F.evaluate_ref(state.F, c, centroid_ref).transpose();
  }
  fields.cell_arrays.emplace_back("stress_voigt", stress);
  fields.cell_arrays.emplace_back("deformation_gradient", defgrad);

  std::ostringstream title;
  title << "phfem state at t = " << format_double(state.t) << " s";
  write_vtk(mesh, fields, path, title.str());
}

std::string frame_name(long step) {
  std::ostringstream name;
  name << "fields_" << std::setfill('0') << std::setw(6) << step << ".vtk";
  return name.str();
}

}  // namespace

ScenarioResult run_rod(const ScenarioConfig& config) {
  if (config.dim() != 1) throw ConfigError("run_rod requires a 1D configuration");
  ScenarioSetup setup = build_scenario(config);
  std::filesystem::create_directories(config.out_dir);

  ScenarioResult result;
  if (config.dump_matrices)
    dump_operator_matrices(setup.system, setup.initial, config.out_dir, result.files);

  const FunctionSpace& V = *setup.system.spaces().velocity;
  const FunctionSpace& S = *setup.system.spaces().stress;
  const FunctionSpace& F = *setup.system.spaces().defgrad;
  const Eigen::VectorXd X0 = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd XL = Eigen::VectorXd::Constant(1, config.L);
  const auto locV0 = V.locate(X0), locVL = V.locate(XL);
  const auto locSL = S.locate(XL), locFL = F.locate(XL);

  std::vector<std::vector<double>> boundary_rows;
  auto record_boundary = [&](const State& s) {
    const double nu_bar = setup.system.input().nu.eval(s.t)(0);
    const double tau_bar = setup.system.input().tau.eval(s.t)(0);
    const double v0 = V.evaluate_ref(s.v, locV0.first, locV0.second)(0);
    const double vL = V.evaluate_ref(s.v, locVL.first, locVL.second)(0);
    const double SL = S.evaluate_ref(s.S, locSL.first, locSL.second)(0);
    const double FL = F.evaluate_ref(s.F, locFL.first, locFL.second)(0);
    boundary_rows.push_back({s.t, nu_bar, v0, tau_bar, FL * SL, vL});
  };
  record_boundary(setup.initial);

  long step = 0;
  if (config.vtk_every > 0) {
    write_state_vtk(setup.system, setup.initial, join_path(config.out_dir, frame_name(0)));
    result.files.push_back(join_path(config.out_dir, frame_name(0)));
  }
  result.trajectory =
      run(setup.system, setup.initial, setup.integrator, [&](const State& s, const StepStats&) {
        record_boundary(s);
        ++step;
        if (config.vtk_every > 0 && step % config.vtk_every == 0) {
          const std::string path = join_path(config.out_dir, frame_name(step));
          write_state_vtk(setup.system, s, path);
          result.files.push_back(path);
        }
      });

  write_hamiltonian_csv(result.trajectory, join_path(config.out_dir, "hamiltonian.csv"),
                        result.files);
  write_csv({"t [s]", "nu_bar [m/s]", "v_at_0 [m/s]", "tau_bar [N]", "FS_at_L [N]",
             "v_at_L [m/s]"},
            boundary_rows, join_path(config.out_dir, "boundary.csv"));
  result.files.push_back(join_path(config.out_dir, "boundary.csv"));
  write_solver_csv(result.trajectory, join_path(config.out_dir, "solver_stats.csv"),
                   result.files);
  return result;
}

ScenarioResult run_beam(const ScenarioConfig& config) {
  if (config.dim() != 2) throw ConfigError("run_beam requires a 2D configuration");
  ScenarioSetup setup = build_scenario(config);
  std::filesystem::create_directories(config.out_dir);

  ScenarioResult result;
  if (config.dump_matrices)
    dump_operator_matrices(setup.system, setup.initial, config.out_dir, result.files);

  const FunctionSpace& V = *setup.system.spaces().velocity;
  Eigen::VectorXd probe(2);
  probe << config.Lx, 0.0;
  if (config.probe.size() == 2) probe = config.probe;
  const auto loc = V.locate(probe);

  std::vector<std::vector<double>> tip_rows;
  auto record_tip = [&](const State& s) {
    const Eigen::VectorXd u = V.evaluate_ref(s.u, loc.first, loc.second);
    tip_rows.push_back({s.t, u(0), u(1)});
  };
  record_tip(setup.initial);

  long step = 0;
  if (config.vtk_every > 0) {
    write_state_vtk(setup.system, setup.initial, join_path(config.out_dir, frame_name(0)));
    result.files.push_back(join_path(config.out_dir, frame_name(0)));
  }
  result.trajectory =
      run(setup.system, setup.initial, setup.integrator, [&](const State& s, const StepStats&) {
        record_tip(s);
        ++step;
        if (config.vtk_every > 0 && step % config.vtk_every == 0) {
          const std::string path = join_path(config.out_dir, frame_name(step));
          write_state_vtk(setup.system, s, path);
          result.files.push_back(path);
        }
      });

  write_hamiltonian_csv(result.trajectory, join_path(config.out_dir, "hamiltonian.csv"),
                        result.files);
  write_csv({"t [s]", "u_x1 [m]", "u_x2 [m]"}, tip_rows,
            join_path(config.out_dir, "tip_displacement.csv"));
  result.files.push_back(join_path(config.out_dir, "tip_displacement.csv"));
  write_solver_csv(result.trajectory, join_path(config.out_dir, "solver_stats.csv"),
                   result.files);
  return result;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  return config.dim() == 1 ? run_rod(config) : run_beam(config);
}

}  // namespace phfem
