#include "ammbp/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace ammbp {
namespace {

constexpr double kPi = std::numbers::pi;

struct GaussRule {
  std::vector<double> nodes, weights;  // on [-1, 1]
};

GaussRule gauss_rule(int points) {
  // Newton on the Legendre recurrence.
  GaussRule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

// Fraction of cell [xl, xr] lying left of x0, snapped at nodes.
double left_fraction(double xl, double xr, double x0) {
  const double f = (x0 - xl) / (xr - xl);
  if (f <= 1e-9) return 0.0;
  if (f >= 1.0 - 1e-9) return 1.0;
  return f;
}

template <std::size_t D>
std::vector<State<D>> riemann_averages(const MeshState& mesh, double x0, const State<D>& left,
                                       const State<D>& right) {
  std::vector<State<D>> out(mesh.cells());
  const auto x = mesh.nodes();
  for (int j = 0; j < mesh.cells(); ++j) {
    const double f = left_fraction(x[j], x[j + 1], x0);
    if (f == 1.0) out[j] = left;
    else if (f == 0.0) out[j] = right;
    else
      for (std::size_t k = 0; k < D; ++k) out[j][k] = f * left[k] + (1.0 - f) * right[k];
  }
  return out;
}

std::vector<double> combine(const std::vector<std::pair<double, const std::vector<double>*>>& terms, std::size_t n) {
  std::vector<double> phi(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (const auto& [w, v] : terms) s += w * (*v)[j] * (*v)[j];
    phi[j] = std::sqrt(s);
  }
  return phi;
}

}  // namespace

std::vector<std::string> problem_ids() {
  return {"advection", "burgers", "burgers-shock", "euler-strong-shock", "fiveq-shock-tube", "fiveq-gas-water"};
}

ProblemSpec make_problem(const std::string& id) {
  ProblemSpec p;
  p.id = id;
  if (id == "advection") {
    p.model = ModelKind::Scalar;
    p.scalar_kind = ScalarModel::Kind::Advection;
    p.advection_speed = 5.0;
    p.a = 0.0;
    p.b = 2.0 * kPi;
    p.t_final = 2.0;
    p.beta = 0.6;
    p.monitor = "advect-random";
    p.u0 = [](double) { return 1.0; };
    p.u_min = p.u_max = 1.0;
    p.bounded = false;
  } else if (id == "burgers" || id == "burgers-shock") {
    p.model = ModelKind::Scalar;
    p.scalar_kind = ScalarModel::Kind::Burgers;
    p.a = 0.0;
    p.b = 2.0 * kPi;
    p.t_final = id == "burgers" ? 0.4 : 1.3;
    p.default_n = id == "burgers" ? 40 : 50;
    p.beta = 0.6;
    p.monitor = "burgers";
    p.u0 = [](double x) {
      const double s = std::sin(x);
      return s * s * s * s;
    };
  } else if (id == "euler-strong-shock") {
    p.model = ModelKind::Euler;
    p.a = -1.0;
    p.b = 1.0;
    p.boundary = BoundaryKind::Free;
    p.t_final = 8e-4;
    p.beta = 0.3;
    p.default_n = 100;
    p.monitor = "euler-rho";
    p.riemann = {0.0, {2.0, 0.0, 1e6}, {1.0, 0.0, 1.0}};
  } else if (id == "fiveq-shock-tube") {
    p.model = ModelKind::FiveEq;
    p.a = -5.0;
    p.b = 5.0;
    p.boundary = BoundaryKind::Free;
    p.t_final = 1.0;
    p.beta = 0.3;
    p.default_n = 100;
    p.monitor = "fiveq-v1";
    p.phase1 = {1.4, 0.0};
    p.phase2 = {5.5, 1.505};
    p.riemann = {0.0, {1.241, 0.991, 0.0, 2.753, 1.0 - 1e-13}, {1.241, 0.991, 0.0, 3.059e-4, 1e-13}};
  } else if (id == "fiveq-gas-water") {
    p.model = ModelKind::FiveEq;
    p.a = 0.0;
    p.b = 1.0;
    p.boundary = BoundaryKind::Free;
    p.t_final = 2.4e-4;
    p.beta = 0.4;
    p.default_n = 200;
    p.monitor = "fiveq-rp2";
    p.phase1 = {1.4, 0.0};
    p.phase2 = {4.4, 6e8};
    p.riemann = {0.3, {5.0, 1e3, 0.0, 1e5, 1.0 - 1e-13}, {5.0, 1e3, 0.0, 1e9, 1e-13}};
  } else {
    throw ConfigError("unknown problem '" + id + "'");
  }
  return p;
}

ScalarModel scalar_model(const ProblemSpec& p) {
  return p.scalar_kind == ScalarModel::Kind::Advection ? ScalarModel::advection(p.advection_speed)
                                                       : ScalarModel::burgers();
}

EulerModel euler_model(const ProblemSpec& p) { return EulerModel(p.gamma); }

FiveEqModel five_eq_model(const ProblemSpec& p) { return FiveEqModel(p.phase1, p.phase2); }

std::vector<double> cell_averages(const std::function<double(double)>& f, const MeshState& mesh, int points) {
  const auto rule = gauss_rule(points);
  const auto x = mesh.nodes();
  std::vector<double> out(mesh.cells());
  for (int j = 0; j < mesh.cells(); ++j) {
    const double c = 0.5 * (x[j] + x[j + 1]);
    const double h = 0.5 * (x[j + 1] - x[j]);
    double s = 0.0;
    for (int q = 0; q < points; ++q) s += rule.weights[q] * f(c + h * rule.nodes[q]);
    out[j] = 0.5 * s;
  }
  return out;
}

std::vector<State<1>> scalar_initial(const ProblemSpec& p, const MeshState& mesh) {
  const auto avg = cell_averages(p.u0, mesh);
  std::vector<State<1>> out(avg.size());
  for (std::size_t j = 0; j < avg.size(); ++j) out[j] = {avg[j]};
  return out;
}

std::vector<State<3>> euler_initial(const ProblemSpec& p, const MeshState& mesh) {
  const EulerModel m = euler_model(p);
  const auto& l = p.riemann.left;
  const auto& r = p.riemann.right;
  return riemann_averages<3>(mesh, p.riemann.x0, m.from_primitive(l[0], l[1], l[2]),
                             m.from_primitive(r[0], r[1], r[2]));
}

std::vector<State<5>> five_eq_initial(const ProblemSpec& p, const MeshState& mesh) {
  const FiveEqModel m = five_eq_model(p);
  const auto& l = p.riemann.left;
  const auto& r = p.riemann.right;
  return riemann_averages<5>(mesh, p.riemann.x0, m.from_primitive(l[0], l[1], l[2], l[3], l[4]),
                             m.from_primitive(r[0], r[1], r[2], r[3], r[4]));
}

double burgers_exact(double x, double t, const std::function<double(double)>& u0) {
  if (t == 0.0) return u0(x);
  auto g = [&](double u) { return u - u0(x - u * t); };
  // Any root lies within the data range seen along nearby characteristics.
  double lo = -1.0, hi = 1.0;
  for (double s = -2.0; s <= 2.0; s += 1e-3) {
    const double v = u0(x - s * t);
    if (!std::isfinite(v)) throw std::runtime_error("burgers_exact: non-finite initial data");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // g is increasing before shock formation, so it changes sign once.
  constexpr int kSamples = 512;
  int changes = 0;
  double prev = g(lo);
  for (int k = 1; k <= kSamples; ++k) {
    const double cur = g(lo + (hi - lo) * k / kSamples);
    if ((cur > 0.0) != (prev > 0.0)) ++changes;
    prev = cur;
  }
  if (changes > 1) throw std::runtime_error("burgers_exact: characteristics cross (shock formed)");

  constexpr double h = 1e-7;
  double u = u0(x);
  for (int it = 0; it < 100; ++it) {
    const double gu = g(u);
    if (std::abs(gu) <= 1e-14) return u;
    const double dg = (g(u + h) - g(u - h)) / (2.0 * h);
    if (!(std::abs(dg) > 1e-12)) break;
    const double next = u - gu / dg;
    if (!std::isfinite(next)) break;
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, std::abs(u))) return next;
    u = next;
  }
  double glo = g(lo), ghi = g(hi);
  if (glo * ghi > 0.0) throw std::runtime_error("burgers_exact: no bracketing root");
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    const double gm = g(m);
    if (std::abs(gm) <= 1e-14 || hi - lo < 1e-15) return m;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = m;
      glo = gm;
    } else {
      hi = m;
    }
  }
  throw std::runtime_error("burgers_exact: iteration did not converge");
}

std::vector<double> exact_cell_averages(const ProblemSpec& p, const MeshState& mesh, double t) {
  if (p.model != ModelKind::Scalar) throw std::invalid_argument("exact solutions exist for scalar problems only");
  if (p.scalar_kind == ScalarModel::Kind::Advection) {
    const double a = p.advection_speed;
    const double len = p.b - p.a;
    return cell_averages(
        [&](double x) {
          const double y = std::fmod(x - a * t - p.a, len);
          return p.u0(p.a + (y < 0.0 ? y + len : y));
        },
        mesh);
  }
  return cell_averages([&](double x) { return burgers_exact(x, t, p.u0); }, mesh);
}

double l1_error(std::span<const double> numeric, std::span<const double> exact, const MeshState& mesh) {
  if (numeric.size() != exact.size() || static_cast<int>(numeric.size()) != mesh.cells()) {
    throw std::invalid_argument("l1_error: mesh mismatch");
  }
  const auto dx = mesh.sizes();
  double e = 0.0;
  for (std::size_t j = 0; j < numeric.size(); ++j) e += std::abs(numeric[j] - exact[j]) * dx[j];
  return e;
}

double convergence_rate(double err_coarse, double err_fine, double dxmax_coarse, double dxmax_fine) {
  return std::log10(err_coarse / err_fine) / std::log10(dxmax_coarse / dxmax_fine);
}

std::vector<ConvergenceRow> convergence_table(const ProblemSpec& p, const std::vector<int>& ns,
                                              const ConvergenceOptions& opt) {
  if (p.model != ModelKind::Scalar) throw ConfigError("convergence tables are defined for scalar problems");
  std::vector<ConvergenceRow> rows;
  const double t_final = opt.t_final.value_or(p.t_final);
  for (int n : ns) {
    ConvergenceRow row;
    row.n = n;
    try {
      StepSettings st;
      st.cfl.cfl = opt.cfl;
      st.limiter = opt.limiter;
      st.moving_mesh = opt.moving_mesh;
      st.boundary = p.boundary;
      st.monitor.beta = opt.beta.value_or(p.beta);
      st.monitor.smoothing_steps = opt.smoothing_steps;
      st.monitor.jacobi_steps = opt.jacobi_steps;
      st.bounds = {p.u_min, p.u_max, p.bounded, p.bounded};
      auto mesh = MeshState::uniform(p.a, p.b, n);
      Simulation<ScalarModel> sim(scalar_model(p), mesh, scalar_initial(p, mesh), st,
                                  scalar_monitor(p.monitor, opt.seed));
      row.u_min = row.u_max = sim.values()[0][0];
      for (const auto& v : sim.values()) {
        row.u_min = std::min(row.u_min, v[0]);
        row.u_max = std::max(row.u_max, v[0]);
      }
      while (sim.time() < t_final) {
        const auto d = sim.step(t_final);
        row.u_min = std::min(row.u_min, d.quantity_min[0]);
        row.u_max = std::max(row.u_max, d.quantity_max[0]);
      }
      std::vector<double> u(n);
      for (int j = 0; j < n; ++j) u[j] = sim.values()[j][0];
      row.l1 = l1_error(u, exact_cell_averages(p, sim.mesh(), t_final), sim.mesh());
      row.dx_max = sim.mesh().max_size();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    if (!rows.empty() && row.error.empty() && rows.back().error.empty()) {
      row.rate = convergence_rate(rows.back().l1, row.l1, rows.back().dx_max, row.dx_max);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::string> monitor_ids() {
  return {"advect-random", "burgers", "euler-rho", "fiveq-v1", "fiveq-v2", "fiveq-rp2"};
}

MonitorFn<ScalarModel> scalar_monitor(const std::string& id, unsigned long long seed) {
  if (id == "advect-random") {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](const MeshState& mesh, std::span<const State<1>>) {
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      std::vector<double> phi(mesh.cells());
      for (auto& v : phi) v = dist(*rng);
      return phi;
    };
  }
  if (id == "burgers") {
    return [](const MeshState& mesh, std::span<const State<1>> cells) {
      std::vector<double> u(cells.size());
      for (std::size_t j = 0; j < u.size(); ++j) u[j] = cells[j][0];
      const auto d = cell_derivatives(u, mesh.centers());
      return combine({{1.0, &d.first}, {1.0, &d.second}}, u.size());
    };
  }
  throw ConfigError("monitor '" + id + "' does not apply to scalar problems");
}

MonitorFn<EulerModel> euler_monitor(const std::string& id) {
  if (id != "euler-rho") throw ConfigError("monitor '" + id + "' does not apply to the Euler equations");
  return [](const MeshState& mesh, std::span<const State<3>> cells) {
    std::vector<double> rho(cells.size());
    for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = cells[j][0];
    const auto d = cell_derivatives(rho, mesh.centers());
    return combine({{1.0, &d.first}, {1.0, &d.second}}, rho.size());
  };
}

MonitorFn<FiveEqModel> five_eq_monitor(const std::string& id) {
  std::array<double, 4> w{};  // rho_x, rho_xx, z_x, u_x
  if (id == "fiveq-v1") w = {100.0, 1.0, 1000.0, 0.0};
  else if (id == "fiveq-v2") w = {100.0, 0.0, 1000.0, 0.0};
  else if (id == "fiveq-rp2") w = {1.0, 1.0, 0.0, 100.0};
  else throw ConfigError("monitor '" + id + "' does not apply to the five-equation model");
  return [w](const MeshState& mesh, std::span<const State<5>> cells) {
    const std::size_t n = cells.size();
    std::vector<double> rho(n), z(n), u(n);
    for (std::size_t j = 0; j < n; ++j) {
      rho[j] = FiveEqModel::density(cells[j]);
      z[j] = cells[j][4];
      u[j] = FiveEqModel::velocity(cells[j]);
    }
    const auto c = mesh.centers();
    const auto dr = cell_derivatives(rho, c);
    const auto dz = cell_derivatives(z, c);
    const auto du = cell_derivatives(u, c);
    return combine({{w[0], &dr.first}, {w[1], &dr.second}, {w[2], &dz.first}, {w[3], &du.first}}, n);
  };
}

}  // namespace ammbp
