#include "ammbp/run.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ammbp/csv.hpp"

namespace ammbp {
namespace {

namespace fs = std::filesystem;

template <class Model>
void write_solution(const fs::path& path, const Model& model, const MeshState& mesh,
                    const std::vector<typename Model::StateT>& values) {
  std::vector<std::string> header = {"x_center", "dx"};
  for (const auto& c : model.component_names()) header.push_back(c);
  csv::Writer w(path.string(), header);
  for (int j = 0; j < mesh.cells(); ++j) {
    w.cell(mesh.center(j)).cell(mesh.sizes()[j]);
    for (double v : model.output_values(values[j])) w.cell(v);
    w.end_row();
  }
}

std::vector<std::string> mesh_header(int n) {
  std::vector<std::string> h = {"t"};
  for (int i = 0; i <= n; ++i) h.push_back("x_" + std::to_string(i));
  return h;
}

void mesh_row(csv::Writer& w, double t, const MeshState& mesh) {
  w.cell(t);
  for (double x : mesh.nodes()) w.cell(x);
  w.end_row();
}

template <class Model>
RunSummary simulate(Simulation<Model>& sim, double t_final, const fs::path& dir, std::ostream& log) {
  RunSummary sum;
  sum.out_dir = dir;
  const auto names = Model::quantity_names();
  sum.quantity_names = names;
  sum.quantity_min.assign(names.size(), std::numeric_limits<double>::infinity());
  sum.quantity_max.assign(names.size(), -std::numeric_limits<double>::infinity());
  for (const auto& v : sim.values()) {
    const auto q = sim.model().quantities(v);
    for (std::size_t k = 0; k < q.size(); ++k) {
      sum.quantity_min[k] = std::min(sum.quantity_min[k], q[k]);
      sum.quantity_max[k] = std::max(sum.quantity_max[k], q[k]);
    }
  }

  const int n = sim.mesh().cells();
  csv::Writer mesh_csv((dir / "mesh.csv").string(), mesh_header(n));
  std::vector<std::string> bh = {"step", "t", "theta_min", "active_interfaces"};
  std::vector<std::string> dh = {"step", "t", "dt", "halvings", "theta_min"};
  for (const auto& q : names) {
    bh.push_back("min_" + q);
    dh.push_back("min_" + q);
  }
  for (const auto& q : names) dh.push_back("max_" + q);
  csv::Writer bounds_csv((dir / "bounds.csv").string(), bh);
  csv::Writer diag_csv((dir / "diagnostics.csv").string(), dh);
  mesh_row(mesh_csv, sim.time(), sim.mesh());

  try {
    while (sim.time() < t_final) {
      const auto d = sim.step(t_final);
      mesh_row(mesh_csv, d.t, sim.mesh());
      bounds_csv.cell(d.step).cell(d.t).cell(d.theta_min).cell(d.active_interfaces);
      diag_csv.cell(d.step).cell(d.t).cell(d.dt).cell(static_cast<long>(d.halvings)).cell(d.theta_min);
      for (double v : d.quantity_min) {
        bounds_csv.cell(v);
        diag_csv.cell(v);
      }
      for (double v : d.quantity_max) diag_csv.cell(v);
      bounds_csv.end_row();
      diag_csv.end_row();
      sum.total_halvings += d.halvings;
      sum.theta_min = std::min(sum.theta_min, d.theta_min);
      for (std::size_t k = 0; k < names.size(); ++k) {
        sum.quantity_min[k] = std::min(sum.quantity_min[k], d.quantity_min[k]);
        sum.quantity_max[k] = std::max(sum.quantity_max[k], d.quantity_max[k]);
      }
    }
  } catch (const AdmissibilityError& e) {
    sum.exit_code = kExitAdmissibility;
    sum.message = std::string("bound-preservation failure: ") + e.what();
  } catch (const HalvingLimitError& e) {
    sum.exit_code = kExitHalvings;
    sum.message = e.what();
  } catch (const std::runtime_error& e) {
    // Geometric breakdown (e.g. a collapsing cell) in a run without limiting.
    sum.exit_code = kExitAdmissibility;
    sum.message = std::string("run aborted: ") + e.what();
  }
  sum.steps = sim.steps();
  sum.t = sim.time();
  write_solution(dir / "solution.csv", sim.model(), sim.mesh(), sim.values());
  if (sum.exit_code == kExitOk) {
    log << "completed " << sum.steps << " steps to t = " << sum.t << " (" << sum.total_halvings << " halvings)\n";
  } else {
    log << "error at t = " << sum.t << " after " << sum.steps << " steps: " << sum.message << "\n";
  }
  return sum;
}

}  // namespace

ProblemSpec resolve_problem(const RunConfig& cfg) {
  ProblemSpec p = make_problem(cfg.problem);
  if (cfg.beta) p.beta = *cfg.beta;
  if (cfg.t_final) p.t_final = *cfg.t_final;
  if (cfg.monitor) p.monitor = *cfg.monitor;
  if (cfg.advection_speed) p.advection_speed = *cfg.advection_speed;
  return p;
}

StepSettings step_settings(const ProblemSpec& p, const RunConfig& cfg) {
  StepSettings st;
  st.cfl.cfl = cfg.cfl;
  st.limiter = cfg.limiter;
  st.moving_mesh = cfg.moving_mesh;
  st.boundary = p.boundary;
  st.monitor.beta = p.beta;
  st.monitor.smoothing_steps = cfg.m;
  st.monitor.jacobi_steps = cfg.s;
  st.bounds = {p.u_min, p.u_max, p.bounded, p.bounded};
  return st;
}

int resolved_cells(const ProblemSpec& p, const RunConfig& cfg) { return cfg.n.value_or(p.default_n); }

fs::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("AMM_BP_OUT_DIR"); env && *env) return fs::path(env);
  return fs::path(cfg.out_dir);
}

RunSummary run_problem(const RunConfig& cfg, std::ostream& log) {
  RunSummary sum;
  try {
    const ProblemSpec p = resolve_problem(cfg);
    const StepSettings st = step_settings(p, cfg);
    const int n = resolved_cells(p, cfg);
    const fs::path dir = output_dir(cfg);
    fs::create_directories(dir);
    for (const auto& w : cfg.warnings) log << "warning: " << w << "\n";
    const auto mesh = MeshState::uniform(p.a, p.b, n);
    switch (p.model) {
      case ModelKind::Scalar: {
        Simulation<ScalarModel> sim(scalar_model(p), mesh, scalar_initial(p, mesh), st,
                                    scalar_monitor(p.monitor, cfg.seed));
        return simulate(sim, p.t_final, dir, log);
      }
      case ModelKind::Euler: {
        Simulation<EulerModel> sim(euler_model(p), mesh, euler_initial(p, mesh), st, euler_monitor(p.monitor));
        return simulate(sim, p.t_final, dir, log);
      }
      case ModelKind::FiveEq: {
        Simulation<FiveEqModel> sim(five_eq_model(p), mesh, five_eq_initial(p, mesh), st,
                                    five_eq_monitor(p.monitor));
        return simulate(sim, p.t_final, dir, log);
      }
    }
  } catch (const ConfigError& e) {
    sum.exit_code = kExitConfig;
    sum.message = e.what();
  } catch (const std::invalid_argument& e) {
    sum.exit_code = kExitConfig;
    sum.message = e.what();
  } catch (const AdmissibilityError& e) {
    sum.exit_code = kExitAdmissibility;
    sum.message = e.what();
  }
  log << "error: " << sum.message << "\n";
  return sum;
}

RunSummary run_convergence(const RunConfig& cfg, const std::vector<int>& ns, std::ostream& log) {
  RunSummary sum;
  try {
    const ProblemSpec p = resolve_problem(cfg);
    if (ns.empty()) throw ConfigError("--Ns needs at least one N");
    for (int n : ns) {
      if (n < 5) throw ConfigError("every N must be at least 5");
    }
    ConvergenceOptions opt;
    opt.limiter = cfg.limiter;
    opt.moving_mesh = cfg.moving_mesh;
    opt.cfl = cfg.cfl;
    opt.beta = p.beta;
    opt.t_final = p.t_final;
    opt.smoothing_steps = cfg.m;
    opt.jacobi_steps = cfg.s;
    opt.seed = cfg.seed;
    const auto rows = convergence_table(p, ns, opt);
    const fs::path dir = output_dir(cfg);
    fs::create_directories(dir);
    sum.out_dir = dir;

    csv::Writer t((dir / "table.csv").string(), {"N", "l1_error", "dx_max", "rate", "u_min", "u_max", "error"});
    std::ofstream md(dir / "table.md");
    md << "| N | L1 error | dx_max | rate | u_min | u_max |\n"
       << "|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& r : rows) {
      t.cell(static_cast<long>(r.n));
      if (r.error.empty()) {
        t.cell(r.l1).cell(r.dx_max).cell(r.rate ? csv::format(*r.rate) : std::string()).cell(r.u_min).cell(r.u_max);
        t.cell(std::string());
        std::ostringstream line;
        line << std::scientific << std::setprecision(2) << "| " << r.n << " | " << r.l1 << " | " << r.dx_max << " | ";
        if (r.rate) line << std::fixed << std::setprecision(2) << *r.rate;
        else line << "--";
        line << std::scientific << std::setprecision(2) << " | " << r.u_min << " | " << r.u_max << " |\n";
        md << line.str();
        log << line.str();
      } else {
        t.cell(std::string()).cell(std::string()).cell(std::string()).cell(std::string()).cell(std::string());
        std::string e = r.error;
        for (char& ch : e) {
          if (ch == ',' || ch == '\n') ch = ' ';
        }
        t.cell(e);
        md << "| " << r.n << " | failed: " << e << " | | | | |\n";
        log << "N = " << r.n << " failed: " << r.error << "\n";
        sum.exit_code = kExitAdmissibility;
        sum.message = r.error;
      }
      t.end_row();
    }
  } catch (const ConfigError& e) {
    sum.exit_code = kExitConfig;
    sum.message = e.what();
    log << "error: " << sum.message << "\n";
  }
  return sum;
}

}  // namespace ammbp
