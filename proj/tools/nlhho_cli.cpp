// Command-line harness: transient runs and the three study drivers, with a
// JSON config file (sections problem/discretization/newton/output) whose
// values CLI flags override.
#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>

#include "nlhho/experiments.hpp"
#include "nlhho/mesh_gen.hpp"
#include "nlhho/mesh_io.hpp"

namespace {

using nlhho::Mesh;
using json = nlohmann::json;

struct AppConfig {
  // problem
  std::string case_name = "exact";  // exact | positivity
  // NaN = "not set"; resolved per subcommand (1.0 generally, 1e-2 longtime).
  double lx = std::numeric_limits<double>::quiet_NaN();
  double c1 = 0.1;
  double dt = -1.0;
  double t_final = -1.0;
  std::string start = "data";  // data | equilibrium
  // discretization
  int k = 1;
  std::string mesh;
  double epsilon = 1.0;
  double eta_l = 1.0;
  double eta_nl = 1.0;
  int quad_order = -1;
  // newton
  nlhho::NewtonConfig newton;
  // output
  std::string out_dir = ".";
};

void apply_config_file(AppConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }

  auto section = [&](const char* name) {
    return j.contains(name) ? j[name] : json::object();
  };
  try {
    const json p = section("problem");
    cfg.case_name = p.value("case", cfg.case_name);
    cfg.lx = p.value("lx", cfg.lx);
    cfg.c1 = p.value("c1", cfg.c1);
    cfg.dt = p.value("dt", cfg.dt);
    cfg.t_final = p.value("t_final", cfg.t_final);
    cfg.start = p.value("start", cfg.start);

    const json d = section("discretization");
    cfg.k = d.value("k", cfg.k);
    cfg.mesh = d.value("mesh", cfg.mesh);
    cfg.epsilon = d.value("epsilon", cfg.epsilon);
    cfg.eta_l = d.value("eta_l", cfg.eta_l);
    cfg.eta_nl = d.value("eta_nl", cfg.eta_nl);
    cfg.quad_order = d.value("quad_order", cfg.quad_order);

    const json n = section("newton");
    cfg.newton.tol_abs = n.value("tol_abs", cfg.newton.tol_abs);
    cfg.newton.tol_rel = n.value("tol_rel", cfg.newton.tol_rel);
    cfg.newton.max_iterations =
        n.value("max_iterations", cfg.newton.max_iterations);
    cfg.newton.overflow_guard =
        n.value("overflow_guard", cfg.newton.overflow_guard);

    const json o = section("output");
    cfg.out_dir = o.value("dir", cfg.out_dir);
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
}

Mesh load_mesh_spec(const std::string& spec) {
  if (spec.empty()) throw std::runtime_error("no mesh specified");
  if (spec.rfind("gen:", 0) == 0) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos != std::string::npos) {
      const auto next = spec.find(':', pos);
      parts.push_back(spec.substr(pos, next - pos));
      pos = next == std::string::npos ? next : next + 1;
    }
    try {
      if (parts.size() == 3 && parts[1] == "tri")
        return nlhho::gen_triangular(std::stoi(parts[2]));
      if (parts.size() == 4 && parts[1] == "kershaw")
        return nlhho::gen_kershaw(std::stoi(parts[2]), std::stod(parts[3]));
      if (parts.size() == 3 && parts[1] == "hex")
        return nlhho::gen_hexdominant(std::stoi(parts[2]));
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("bad numeric parameter in mesh spec '" + spec +
                               "'");
    }
    throw std::runtime_error(
        "unknown mesh spec '" + spec +
        "' (expected gen:tri:N, gen:kershaw:N:D, gen:hex:N or a file path)");
  }
  return nlhho::read_mesh_file(spec);
}

double resolve_lx(const AppConfig& cfg, double fallback) {
  return std::isnan(cfg.lx) ? fallback : cfg.lx;
}

nlhho::ProblemSpec make_problem(const AppConfig& cfg) {
  nlhho::ProblemSpec spec;
  if (cfg.case_name == "exact") {
    nlhho::ExactSolutionCase exact{.lx = resolve_lx(cfg, 1.0), .c1 = cfg.c1};
    spec = exact.problem(cfg.dt > 0 ? cfg.dt : 1e-2,
                         cfg.t_final > 0 ? cfg.t_final : 0.1);
  } else if (cfg.case_name == "positivity") {
    spec = nlhho::positivity_problem(cfg.dt > 0 ? cfg.dt : 1e-5,
                                     cfg.t_final > 0 ? cfg.t_final : 5e-4);
  } else {
    throw std::runtime_error("unknown problem case '" + cfg.case_name +
                             "' (expected exact or positivity)");
  }
  spec.params.epsilon = cfg.epsilon;
  spec.params.eta_l = cfg.eta_l;
  spec.params.eta_nl = cfg.eta_nl;
  if (cfg.start == "equilibrium")
    spec.start_from_equilibrium = true;
  else if (cfg.start != "data")
    throw std::runtime_error("unknown start mode '" + cfg.start +
                             "' (expected data or equilibrium)");
  return spec;
}

std::filesystem::path out_path(const AppConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return std::filesystem::path(cfg.out_dir) / name;
}

int cmd_run(const AppConfig& cfg) {
  const Mesh mesh = load_mesh_spec(cfg.mesh);
  const nlhho::ProblemSpec spec = make_problem(cfg);
  const nlhho::HhoSpace space(mesh, cfg.k, cfg.quad_order);
  const auto caches =
      nlhho::build_operator_caches(space, spec.lambda, spec.params);

  const nlhho::RunResult result =
      nlhho::run(space, caches, spec, cfg.newton);

  nlhho::write_history_csv(out_path(cfg, "history.csv").string(),
                           result.history);
  std::vector<std::pair<double, double>> mass, ent, l1;
  for (const auto& r : result.history) {
    mass.emplace_back(r.time, r.mass);
    ent.emplace_back(r.time, r.entropy);
    l1.emplace_back(r.time, r.l1_dist);
  }
  nlhho::write_plot_data(out_path(cfg, "mass.dat").string(), mass);
  nlhho::write_plot_data(out_path(cfg, "entropy.dat").string(), ent);
  nlhho::write_plot_data(out_path(cfg, "l1_dist.dat").string(), l1);

  std::cout << "steps: " << result.history.size() - 1
            << "  newton iterations: " << result.total_newton_iterations
            << "  linear solves: " << result.total_linear_solves
            << "  wall s: " << result.seconds << "\n";
  if (!result.completed) {
    std::cerr << "run aborted: " << result.error << "\n";
    return 1;
  }
  return 0;
}

int cmd_convergence(const AppConfig& cfg, int levels) {
  const nlhho::ErrorReport report = nlhho::convergence_study(
      cfg.k, levels, 4, resolve_lx(cfg, 1.0), cfg.c1, cfg.newton);
  nlhho::write_errors_csv(out_path(cfg, "errors.csv").string(), report);

  std::vector<std::pair<double, double>> e_l2, e_g;
  for (const auto& r : report.rows) {
    e_l2.emplace_back(r.h, r.err_l2);
    e_g.emplace_back(r.h, r.err_grad);
  }
  nlhho::write_plot_data(out_path(cfg, "error_l2.dat").string(), e_l2);
  nlhho::write_plot_data(out_path(cfg, "error_grad.dat").string(), e_g);

  std::cout << "n,h,err_l2,err_grad,err_interp\n";
  for (const auto& r : report.rows)
    std::cout << r.n << "," << r.h << "," << r.err_l2 << "," << r.err_grad
              << "," << r.err_interp << "\n";
  if (!report.orders_l2.empty())
    std::cout << "final observed orders: L2 " << report.orders_l2.back()
              << ", gradient " << report.orders_grad.back() << "\n";
  return 0;
}

int cmd_longtime(const AppConfig& cfg) {
  const Mesh mesh = load_mesh_spec(
      cfg.mesh.empty() ? std::string("gen:kershaw:16:0.3") : cfg.mesh);
  const nlhho::LongtimeReport report = nlhho::longtime_study(
      mesh, cfg.k, resolve_lx(cfg, 1e-2), cfg.dt > 0 ? cfg.dt : 0.1,
      cfg.t_final > 0 ? cfg.t_final : 150.0, -1.0, -1.0, cfg.newton);

  nlhho::write_plot_data(out_path(cfg, "decay.dat").string(), report.decay);
  std::cout << "alpha: " << report.alpha
            << "  fitted rate: " << report.fitted_rate << "  window: ["
            << report.fit_t0 << ", " << report.fit_t1 << "]\n";
  if (!report.completed) {
    std::cerr << "longtime run did not complete\n";
    return 1;
  }
  return 0;
}

int cmd_positivity(const AppConfig& cfg) {
  const Mesh mesh = load_mesh_spec(
      cfg.mesh.empty() ? std::string("gen:hex:24") : cfg.mesh);
  const nlhho::PositivityReport report = nlhho::positivity_study(
      mesh, cfg.k, cfg.dt > 0 ? cfg.dt : 1e-5,
      cfg.t_final > 0 ? cfg.t_final : 5e-4, cfg.newton);

  nlhho::write_positivity_csv(out_path(cfg, "positivity.csv").string(),
                              {report});
  std::cout << "k=" << report.k << "  mincells=" << report.mincells
            << "  minfaces=" << report.minfaces
            << "  mincellQN=" << report.mincellQN
            << "  minfaceQN=" << report.minfaceQN
            << "  linear solves=" << report.linear_solves << "\n";
  if (!report.completed) {
    std::cerr << "positivity run did not complete\n";
    return 1;
  }
  return 0;
}

int cmd_mesh_info(const AppConfig& cfg, const std::string& export_path) {
  const Mesh mesh = load_mesh_spec(cfg.mesh);
  double min_area = std::numeric_limits<double>::infinity();
  for (double a : mesh.cell_area) min_area = std::min(min_area, a);
  int boundary = 0;
  for (int f = 0; f < mesh.n_faces(); ++f)
    if (mesh.face_is_boundary(f)) ++boundary;
  std::cout << "vertices: " << mesh.n_vertices()
            << "\ncells: " << mesh.n_cells() << "\nfaces: " << mesh.n_faces()
            << " (" << boundary << " boundary)"
            << "\nh: " << mesh.h_max << "\ntotal area: " << mesh.total_area()
            << "\nmin cell area: " << min_area << "\n";
  if (!export_path.empty()) {
    nlhho::write_mesh_file(export_path, mesh);
    std::cout << "written: " << export_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity-preserving hybrid high-order solver for "
               "anisotropic advection-diffusion"};
  app.require_subcommand(1);

  AppConfig cfg;
  std::string config_path;
  int levels = 3;
  std::string export_path;

  auto add_common = [&](CLI::App* sub, bool with_mesh = true) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--k", cfg.k, "face polynomial degree");
    if (with_mesh)
      sub->add_option("--mesh", cfg.mesh,
                      "mesh file path or gen:tri:N | gen:kershaw:N:D | "
                      "gen:hex:N");
    sub->add_option("--dt", cfg.dt, "initial time step");
    sub->add_option("--tfinal", cfg.t_final, "final time");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--epsilon", cfg.epsilon, "linear perturbation weight");
    sub->add_option("--eta-l", cfg.eta_l, "linear jump penalty");
    sub->add_option("--eta-nl", cfg.eta_nl, "nonlinear jump penalty");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "single transient run");
  add_common(run_cmd);
  run_cmd->add_option("--case", cfg.case_name, "exact | positivity");
  run_cmd->add_option("--lx", cfg.lx, "anisotropy ratio of the exact case");
  run_cmd->add_option("--c1", cfg.c1, "amplitude of the exact case");
  run_cmd->add_option("--start", cfg.start, "data | equilibrium");

  CLI::App* conv_cmd =
      app.add_subcommand("convergence", "error study on refined meshes");
  add_common(conv_cmd, false);
  conv_cmd->add_option("--meshes", levels, "number of refinement levels");
  conv_cmd->add_option("--lx", cfg.lx, "anisotropy ratio");
  conv_cmd->add_option("--c1", cfg.c1, "amplitude");

  CLI::App* long_cmd =
      app.add_subcommand("longtime", "decay to equilibrium study");
  add_common(long_cmd);
  long_cmd->add_option("--lx", cfg.lx, "anisotropy ratio");

  CLI::App* pos_cmd =
      app.add_subcommand("positivity", "minimum-density statistics");
  add_common(pos_cmd);

  CLI::App* info_cmd = app.add_subcommand("mesh-info", "mesh statistics");
  info_cmd->add_option("--config", config_path, "JSON config file");
  info_cmd->add_option("--mesh", cfg.mesh, "mesh file path or gen:...");
  info_cmd->add_option("--export", export_path, "write mesh to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    // Config file first, then re-parse flags so they take precedence.
    if (!config_path.empty()) {
      AppConfig file_cfg;
      apply_config_file(file_cfg, config_path);
      const AppConfig flag_cfg = cfg;
      cfg = file_cfg;
      // Flags that were actually given override the file values.
      for (CLI::App* sub :
           {run_cmd, conv_cmd, long_cmd, pos_cmd, info_cmd}) {
        if (!sub->parsed()) continue;
        auto take = [&](const char* name, auto member) {
          if (sub->get_option_no_throw(name) &&
              sub->get_option_no_throw(name)->count() > 0)
            cfg.*member = flag_cfg.*member;
        };
        take("--k", &AppConfig::k);
        take("--mesh", &AppConfig::mesh);
        take("--dt", &AppConfig::dt);
        take("--tfinal", &AppConfig::t_final);
        take("--out", &AppConfig::out_dir);
        take("--epsilon", &AppConfig::epsilon);
        take("--eta-l", &AppConfig::eta_l);
        take("--eta-nl", &AppConfig::eta_nl);
        take("--case", &AppConfig::case_name);
        take("--lx", &AppConfig::lx);
        take("--c1", &AppConfig::c1);
        take("--start", &AppConfig::start);
      }
    }

    if (run_cmd->parsed()) return cmd_run(cfg);
    if (conv_cmd->parsed()) return cmd_convergence(cfg, levels);
    if (long_cmd->parsed()) return cmd_longtime(cfg);
    if (pos_cmd->parsed()) return cmd_positivity(cfg);
    if (info_cmd->parsed()) return cmd_mesh_info(cfg, export_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
