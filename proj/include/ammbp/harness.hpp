#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ammbp/mesh.hpp"
#include "ammbp/systems/euler.hpp"
#include "ammbp/systems/five_eq.hpp"
#include "ammbp/systems/scalar.hpp"
#include "ammbp/timestepper.hpp"
#include "ammbp/types.hpp"

namespace ammbp {

enum class ModelKind { Scalar, Euler, FiveEq };

// Two constant states separated at x0; components are primitives
// (rho, u, p) or (rho1, rho2, u, p, z1).
struct RiemannData {
  double x0 = 0.0;
  std::vector<double> left;
  std::vector<double> right;
};

struct ProblemSpec {
  std::string id;
  ModelKind model = ModelKind::Scalar;
  double a = 0.0;
  double b = 1.0;
  BoundaryKind boundary = BoundaryKind::Periodic;
  double t_final = 1.0;
  std::string monitor;
  double beta = 0.6;
  int default_n = 40;

  // Scalar problems.
  ScalarModel::Kind scalar_kind = ScalarModel::Kind::Burgers;
  double advection_speed = 1.0;
  std::function<double(double)> u0;
  double u_min = 0.0, u_max = 1.0;  // invariant domain of the scalar problem
  bool bounded = true;               // false: limiter has nothing to enforce

  // Systems.
  double gamma = 1.4;
  StiffenedPhase phase1, phase2;
  RiemannData riemann;
};

std::vector<std::string> problem_ids();
// Throws ConfigError for an unknown id.
ProblemSpec make_problem(const std::string& id);

ScalarModel scalar_model(const ProblemSpec& p);
EulerModel euler_model(const ProblemSpec& p);
FiveEqModel five_eq_model(const ProblemSpec& p);

// 5-point Gauss-Legendre cell averages of a pointwise function.
std::vector<double> cell_averages(const std::function<double(double)>& f, const MeshState& mesh, int points = 5);

std::vector<State<1>> scalar_initial(const ProblemSpec& p, const MeshState& mesh);
std::vector<State<3>> euler_initial(const ProblemSpec& p, const MeshState& mesh);
std::vector<State<5>> five_eq_initial(const ProblemSpec& p, const MeshState& mesh);

// Solves u = u0(x - u t) by Newton from u0(x) with a bisection fallback.
// Throws std::runtime_error if neither converges (after shock formation).
double burgers_exact(double x, double t, const std::function<double(double)>& u0);

// Exact cell averages of the problem's smooth solution at time t.
std::vector<double> exact_cell_averages(const ProblemSpec& p, const MeshState& mesh, double t);

double l1_error(std::span<const double> numeric, std::span<const double> exact, const MeshState& mesh);

double convergence_rate(double err_coarse, double err_fine, double dxmax_coarse, double dxmax_fine);

struct ConvergenceRow {
  int n = 0;
  double l1 = 0.0;
  double dx_max = 0.0;
  std::optional<double> rate;
  double u_min = 0.0;
  double u_max = 0.0;
  std::string error;  // non-empty when the run failed
};

struct ConvergenceOptions {
  bool limiter = true;
  bool moving_mesh = true;
  double cfl = 0.16;
  std::optional<double> beta;
  std::optional<double> t_final;
  int smoothing_steps = 8;
  int jacobi_steps = 8;
  unsigned long long seed = 20240611ULL;
};

// Runs the scalar problem at each N; u_min/u_max cover every accepted stage.
std::vector<ConvergenceRow> convergence_table(const ProblemSpec& p, const std::vector<int>& ns,
                                              const ConvergenceOptions& opt);

std::vector<std::string> monitor_ids();

// phi^0 evaluators. `advect-random` draws fresh uniform [0,1] values per cell
// on every call from an mt19937_64 seeded with `seed`.
MonitorFn<ScalarModel> scalar_monitor(const std::string& id, unsigned long long seed);
MonitorFn<EulerModel> euler_monitor(const std::string& id);
MonitorFn<FiveEqModel> five_eq_monitor(const std::string& id);

}  // namespace ammbp
