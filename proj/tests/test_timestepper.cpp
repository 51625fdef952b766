#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "ammbp/harness.hpp"
#include "ammbp/timestepper.hpp"

using namespace ammbp;

namespace {

template <class Model>
MonitorFn<Model> no_monitor() {
  return [](const MeshState& m, std::span<const typename Model::StateT>) { return std::vector<double>(m.cells(), 0.0); };
}

template <class Model>
MonitorFn<Model> noise_monitor(unsigned long long seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const MeshState& m, std::span<const typename Model::StateT>) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> phi(m.cells());
    for (auto& v : phi) v = u(*rng);
    return phi;
  };
}

// One first stage (xi = 0) through the public pipeline.
template <class Model>
struct StageRun {
  StageData<Model> sd;
  std::vector<typename Model::StateT> next;
  std::vector<double> new_sizes;
};

template <class Model>
StageRun<Model> run_stage(const Model& model, const std::vector<typename Model::StateT>& cells,
                          const std::vector<double>& sizes, const MeshMotion& motion, BoundaryKind kind, bool limiter,
                          const limiter::Bounds& bounds) {
  StageRun<Model> r;
  const int n = static_cast<int>(cells.size());
  auto& sd = r.sd;
  sd.alpha = model.stage_alpha(cells, motion.velocities);
  sd.lambda.resize(n);
  sd.moved_sizes.resize(n);
  for (int j = 0; j < n; ++j) {
    sd.moved_sizes[j] = sizes[j] + motion.dt * (motion.velocities[j + 1] - motion.velocities[j]);
    sd.lambda[j] = motion.dt / sd.moved_sizes[j];
  }
  std::vector<typename Model::StateT> ext;
  std::vector<double> ext_sizes;
  extend<Model>(cells, sizes, kind, ext, ext_sizes);
  const auto rec = reconstruct_cells(model, ext, ext_sizes, nullptr);
  interface_fluxes(model, ext, rec, motion.velocities, sd.alpha, sd);
  sub_cell_states<Model>(cells, sd.high_flux, sd.high_aux, motion.velocities, sd.lambda, sd.high_minus, sd.high_plus);
  sub_cell_states<Model>(cells, sd.low_flux, sd.low_aux, motion.velocities, sd.lambda, sd.low_minus, sd.low_plus);
  limit_interfaces(model, kind, limiter, bounds, sd);
  r.new_sizes = advance_cell_sizes(sizes, sizes, motion, 0.0);
  r.next = stage_update<Model>(cells, sizes, cells, sizes, sd, motion.dt, 0.0, r.new_sizes);
  return r;
}

// (theta_R u^{H,+} + (1 - theta_R) u^{L,+} + theta_L u^{H,-} + (1 - theta_L) u^{L,-}) / 2
template <class Model>
void check_convex_decomposition(const StageRun<Model>& r, double tol) {
  const auto& sd = r.sd;
  for (std::size_t j = 0; j < r.next.size(); ++j) {
    const double tl = sd.theta[j], tr = sd.theta[j + 1];
    for (std::size_t k = 0; k < Model::kVars; ++k) {
      const double plus = tr * sd.high_plus[j][k] + (1 - tr) * sd.low_plus[j][k];
      const double minus = tl * sd.high_minus[j][k] + (1 - tl) * sd.low_minus[j][k];
      const double decomposed = 0.5 * (plus + minus);
      const double scale = std::max({std::abs(r.next[j][k]), std::abs(sd.high_plus[j][k]), std::abs(sd.low_plus[j][k]),
                                     std::abs(sd.high_minus[j][k]), std::abs(sd.low_minus[j][k]),
                                     sd.lambda[j] * std::abs(sd.high_flux[j][k]), sd.lambda[j] * std::abs(sd.high_flux[j + 1][k]),
                                     sd.lambda[j] * std::abs(sd.high_aux[j][k]), sd.lambda[j] * std::abs(sd.low_aux[j][k]), 1e-300});
      CHECK(std::abs(decomposed - r.next[j][k]) <= tol * scale);
    }
  }
}

std::vector<double> random_sizes(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> s(n);
  for (auto& v : s) v = u(rng) * 2.0 * M_PI / n;
  return s;
}

MeshMotion random_motion(std::mt19937_64& rng, int n, double scale, double dt, bool periodic) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MeshMotion m{std::vector<double>(n + 1, 0.0), dt};
  for (int i = 1; i < n; ++i) m.velocities[i] = scale * u(rng);
  if (periodic) m.velocities[n] = m.velocities[0] = 0.0;
  return m;
}

}  // namespace

TEST_CASE("nominal time step") {
  const auto burgers = ScalarModel::burgers();
  const auto mesh = MeshState::uniform(0.0, 1.0, 10);
  const std::vector<State<1>> half(10, State<1>{0.5});
  CHECK(nominal_dt<ScalarModel>(burgers, half, mesh, CflPolicy{}) == doctest::Approx(0.032).epsilon(1e-14));
  const std::vector<State<1>> one(10, State<1>{1.0});
  CHECK(nominal_dt<ScalarModel>(burgers, one, mesh, CflPolicy{}) ==
        doctest::Approx(0.5 * nominal_dt<ScalarModel>(burgers, half, mesh, CflPolicy{})));
  const std::vector<State<1>> zero(10, State<1>{0.0});
  CHECK(std::isfinite(nominal_dt<ScalarModel>(burgers, zero, mesh, CflPolicy{})));
  const std::vector<double> omega{0.0, 1.0, -2.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(ScalarModel::advection(5.0).stage_alpha(one, omega) == 7.0);
}

TEST_CASE("ghost cells") {
  const std::vector<State<1>> cells{{1}, {2}, {3}, {4}, {5}};
  const std::vector<double> sizes{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<State<1>> ext;
  std::vector<double> es;
  extend<ScalarModel>(cells, sizes, BoundaryKind::Periodic, ext, es);
  CHECK(ext[0][0] == 3);
  CHECK(ext[2][0] == 5);
  CHECK(ext[8][0] == 1);
  CHECK(es[2] == 0.5);
  extend<ScalarModel>(cells, sizes, BoundaryKind::Free, ext, es);
  CHECK(ext[0][0] == 1);
  CHECK(ext[10][0] == 5);
  CHECK(es[2] == 0.1);
  CHECK(es[1] == 0.2);
  CHECK(es[9] == 0.4);
}

TEST_CASE("sub-cell states") {
  const auto burgers = ScalarModel::burgers();
  SUBCASE("constant field at rest") {
    const std::vector<State<1>> cells(6, State<1>{0.7});
    const MeshMotion m{std::vector<double>(7, 0.0), 0.05};
    const auto r = run_stage(burgers, cells, std::vector<double>(6, 0.3), m, BoundaryKind::Periodic, true, {});
    for (int j = 0; j < 6; ++j) {
      CHECK(r.sd.high_plus[j][0] == doctest::Approx(0.7).epsilon(1e-15));
      CHECK(r.sd.high_minus[j][0] == doctest::Approx(0.7).epsilon(1e-15));
      CHECK(r.sd.low_plus[j][0] == doctest::Approx(0.7).epsilon(1e-15));
    }
  }
  SUBCASE("averages as reconstruction give the first-order states") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 7;
    std::vector<State<1>> cells(n);
    for (auto& c : cells) c = {u(rng)};
    const auto motion = random_motion(rng, n, 0.5, 0.01, true);
    std::vector<State<1>> ext;
    std::vector<double> es;
    extend<ScalarModel>(cells, std::vector<double>(n, 0.2), BoundaryKind::Periodic, ext, es);
    std::vector<PointValues<ScalarModel>> flat(n + 2);
    for (int j = -1; j <= n; ++j) flat[j + 1] = {ext[j + kGhosts], ext[j + kGhosts], ext[j + kGhosts]};
    StageData<ScalarModel> sd;
    interface_fluxes(burgers, ext, flat, motion.velocities, 2.0, sd);
    for (int i = 0; i <= n; ++i) CHECK(sd.high_flux[i] == sd.low_flux[i]);
  }
  SUBCASE("first-order Burgers at lambda alpha = 1/2") {
    const std::vector<State<1>> cells{{0.0}, {1.0}, {0.0}};
    const std::vector<State<1>> flux{lf_flux(burgers, 0.0, cells[2], cells[0], 1.0),
                                     lf_flux(burgers, 0.0, cells[0], cells[1], 1.0),
                                     lf_flux(burgers, 0.0, cells[1], cells[2], 1.0),
                                     lf_flux(burgers, 0.0, cells[2], cells[0], 1.0)};
    std::vector<State<1>> aux;
    for (const auto& c : cells) aux.push_back(burgers.flux(c));
    std::vector<State<1>> minus, plus;
    sub_cell_states<ScalarModel>(cells, flux, aux, std::vector<double>(4, 0.0), std::vector<double>(3, 0.5), minus,
                                 plus);
    for (int j = 0; j < 3; ++j) {
      CHECK(minus[j][0] >= 0.0);
      CHECK(minus[j][0] <= 1.0);
      CHECK(plus[j][0] >= 0.0);
      CHECK(plus[j][0] <= 1.0);
    }
  }
  SUBCASE("sharpness of the bound-preserving CFL on a moving interface") {
    // omega = -1 and alpha = max |u - omega| = 2 for u in [0, 1].
    auto worst = [&](double lambda) {
      double lo = 1.0, hi = 0.0;
      for (int a = 0; a <= 50; ++a) {
        for (int c = 0; c <= 50; ++c) {
          const std::vector<State<1>> cells{{c / 50.0}, {a / 50.0}};
          const std::vector<double> omega{-1.0, -1.0, -1.0};
          const std::vector<State<1>> flux{cells[0], lf_flux(burgers, -1.0, cells[0], cells[1], 2.0), cells[1]};
          std::vector<State<1>> aux{burgers.flux(cells[0]), burgers.flux(cells[1])};
          std::vector<State<1>> minus, plus;
          sub_cell_states<ScalarModel>(cells, flux, aux, omega, std::vector<double>(2, lambda), minus, plus);
          lo = std::min({lo, minus[1][0], plus[0][0]});
          hi = std::max({hi, minus[1][0], plus[0][0]});
        }
      }
      return std::pair{lo, hi};
    };
    const auto ok = worst(0.5 / 2.0);
    CHECK(ok.first >= 0.0);
    CHECK(ok.second <= 1.0);
    const auto bad = worst(0.6 / 2.0);
    CHECK((bad.first < 0.0 || bad.second > 1.0));
  }
}

TEST_CASE("convex decomposition matches the flux-form update") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 24;
  SUBCASE("Burgers, limiter on") {
    for (int trial = 0; trial < 50; ++trial) {
      const auto sizes = random_sizes(rng, n);
      std::vector<State<1>> cells(n);
      double x = 0.0;
      for (int j = 0; j < n; ++j) {
        cells[j] = {std::pow(std::sin(x + 0.5 * sizes[j]), 4) + (trial % 2 ? 0.0 : 0.3 * (u(rng) - 0.5))};
        cells[j][0] = std::clamp(cells[j][0], 0.0, 1.0);
        x += sizes[j];
      }
      const auto motion = random_motion(rng, n, 2.0, 0.02, true);
      const auto r = run_stage(ScalarModel::burgers(), cells, sizes, motion, BoundaryKind::Periodic, true,
                               limiter::Bounds{0.0, 1.0, true, true});
      check_convex_decomposition(r, 1e-13);
    }
  }
  SUBCASE("Euler, limiter on") {
    const EulerModel model(1.4);
    for (int trial = 0; trial < 50; ++trial) {
      const auto sizes = random_sizes(rng, n);
      std::vector<State<3>> cells(n);
      for (int j = 0; j < n; ++j) {
        const bool left = j < n / 2;
        cells[j] = model.from_primitive(left ? 1.0 : 0.01 + 0.1 * u(rng), u(rng) - 0.5, left ? 1000.0 : 0.01);
      }
      const auto motion = random_motion(rng, n, 1.0, 1e-4, false);
      const auto r = run_stage(model, cells, sizes, motion, BoundaryKind::Free, true, {});
      check_convex_decomposition(r, 1e-13);
    }
  }
  SUBCASE("five-equation, limiter on") {
    const FiveEqModel model({1.4, 0.0}, {4.4, 6e8});
    for (int trial = 0; trial < 50; ++trial) {
      const auto sizes = random_sizes(rng, n);
      std::vector<State<5>> cells(n);
      for (int j = 0; j < n; ++j) {
        const bool gas = j < n / 3 + trial % 5;
        cells[j] = gas ? model.from_primitive(50.0, 1000.0, 0.0, 1e9, 1.0 - 1e-8)
                       : model.from_primitive(50.0, 1000.0, 0.0, 1e5, 1e-8);
      }
      const auto motion = random_motion(rng, n, 10.0, 1e-6, false);
      const auto r = run_stage(model, cells, sizes, motion, BoundaryKind::Free, true, {});
      check_convex_decomposition(r, 1e-12);
    }
  }
}

TEST_CASE("stage update reductions") {
  const auto burgers = ScalarModel::burgers();
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 10;
  std::vector<State<1>> cells(n);
  for (auto& c : cells) c = {u(rng)};
  const std::vector<double> sizes(n, 0.1);
  SUBCASE("forward Euler finite volume") {
    const MeshMotion m{std::vector<double>(n + 1, 0.0), 0.01};
    const auto r = run_stage(burgers, cells, sizes, m, BoundaryKind::Periodic, false, {});
    for (int j = 0; j < n; ++j) {
      const double fe = cells[j][0] - 0.01 / 0.1 * (r.sd.high_flux[j + 1][0] - r.sd.high_flux[j][0]);
      CHECK(r.next[j][0] == doctest::Approx(fe).epsilon(1e-15));
    }
  }
  SUBCASE("zero flux leaves the field unchanged through three stages") {
    StageData<ScalarModel> sd;
    sd.moved_sizes = sizes;
    sd.theta.assign(n + 1, 1.0);
    sd.blended_flux.assign(n + 1, State<1>{0.37});
    sd.high_aux = sd.low_aux = std::vector<State<1>>(n, State<1>{0.0});
    auto cur = cells;
    for (double xi : kStageXi) cur = stage_update<ScalarModel>(cur, sizes, cells, sizes, sd, 0.01, xi, sizes);
    for (int j = 0; j < n; ++j) CHECK(cur[j][0] == doctest::Approx(cells[j][0]).epsilon(1e-15));
  }
  SUBCASE("non-positive moved size is reported") {
    StageData<ScalarModel> sd;
    sd.moved_sizes = sizes;
    sd.moved_sizes[3] = 0.0;
    sd.theta.assign(n + 1, 1.0);
    sd.blended_flux.assign(n + 1, State<1>{0.0});
    sd.high_aux = sd.low_aux = std::vector<State<1>>(n, State<1>{0.0});
    CHECK_THROWS(stage_update<ScalarModel>(cells, sizes, cells, sizes, sd, 0.01, 0.0, sizes));
  }
}

TEST_CASE("D-GCL end to end") {
  SUBCASE("scalar constant under random motion") {
    for (double a : {-2.0, 5.0}) {
      const auto mesh = MeshState::uniform(0.0, 2.0 * M_PI, 40);
      StepSettings st;
      st.bounds = {0.0, 0.0, false, false};
      Simulation<ScalarModel> sim(ScalarModel::advection(a), mesh, std::vector<State<1>>(40, State<1>{1.0}), st,
                                  noise_monitor<ScalarModel>(5));
      for (int k = 0; k < 100; ++k) sim.step(10.0);
      for (const auto& v : sim.values()) CHECK(std::abs(v[0] - 1.0) <= 1e-13);
    }
  }
  SUBCASE("Euler constant under random motion") {
    const EulerModel model(1.4);
    const auto mesh = MeshState::uniform(0.0, 1.0, 30);
    StepSettings st;
    st.boundary = BoundaryKind::Free;
    const auto s = model.from_primitive(1.3, 0.4, 2.0);
    Simulation<EulerModel> sim(model, mesh, std::vector<State<3>>(30, s), st, noise_monitor<EulerModel>(6));
    for (int k = 0; k < 100; ++k) sim.step(10.0);
    for (const auto& v : sim.values()) {
      for (int k = 0; k < 3; ++k) CHECK(std::abs(v[k] - s[k]) <= 1e-13 * std::max(1.0, std::abs(s[k])));
    }
  }
  SUBCASE("five-equation constant under random motion") {
    const FiveEqModel model({1.4, 0.0}, {4.4, 6e8});
    const auto mesh = MeshState::uniform(0.0, 1.0, 30);
    StepSettings st;
    st.boundary = BoundaryKind::Free;
    const auto s = model.from_primitive(1.0, 1000.0, 10.0, 1e5, 0.4);
    Simulation<FiveEqModel> sim(model, mesh, std::vector<State<5>>(30, s), st, noise_monitor<FiveEqModel>(7));
    for (int k = 0; k < 50; ++k) sim.step(10.0);
    for (const auto& v : sim.values()) {
      for (int k = 0; k < 5; ++k) CHECK(std::abs(v[k] - s[k]) <= 1e-12 * std::max(1.0, std::abs(s[k])));
    }
  }
}

TEST_CASE("Burgers runs") {
  const auto p = make_problem("burgers");
  const int n = 80;
  auto run = [&](bool limiter, bool moving) {
    const auto mesh = MeshState::uniform(p.a, p.b, n);
    StepSettings st;
    st.limiter = limiter;
    st.moving_mesh = moving;
    st.bounds = {0.0, 1.0, true, true};
    Simulation<ScalarModel> sim(scalar_model(p), mesh, scalar_initial(p, mesh), st, scalar_monitor("burgers", 1));
    auto mass = [&] {
      double m = 0.0;
      for (int j = 0; j < n; ++j) m += sim.mesh().sizes()[j] * sim.values()[j][0];
      return m;
    };
    const double m0 = mass();
    int halvings = 0;
    double lo = 1.0, hi = 0.0;
    while (sim.time() < p.t_final) {
      const auto d = sim.step(p.t_final);
      halvings += d.halvings;
      lo = std::min(lo, d.quantity_min[0]);
      hi = std::max(hi, d.quantity_max[0]);
      CHECK(std::abs(mass() - m0) <= 1e-11 * std::abs(m0));
    }
    CHECK(sim.time() == p.t_final);
    return std::tuple{halvings, lo, hi, sim.values()};
  };
  SUBCASE("conservation and bounds, limiter on") {
    const auto [h, lo, hi, v] = run(true, true);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0 + 1e-14);
  }
  SUBCASE("conservation, limiter off") {
    const auto [h, lo, hi, v] = run(false, true);
    CHECK(lo < 0.0);
  }
  SUBCASE("fixed mesh needs no halvings") {
    const auto [h, lo, hi, v] = run(true, false);
    CHECK(h == 0);
  }
}

TEST_CASE("limiter off equals an inactive limiter bit for bit") {
  const auto p = make_problem("burgers");
  const auto mesh = MeshState::uniform(p.a, p.b, 40);
  auto run = [&](bool limiter) {
    StepSettings st;
    st.limiter = limiter;
    st.bounds = {0.0, 0.0, false, false};
    Simulation<ScalarModel> sim(scalar_model(p), mesh, scalar_initial(p, mesh), st, scalar_monitor("burgers", 1));
    for (int k = 0; k < 20; ++k) sim.step(p.t_final);
    return std::pair{sim.values(), std::vector<double>(sim.mesh().nodes().begin(), sim.mesh().nodes().end())};
  };
  const auto a = run(false), b = run(true);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("halving limit") {
  const auto mesh = MeshState::uniform(0.0, 1.0, 10);
  StepSettings st;
  st.cfl.ap_limit = 0.16 / 64.0;
  st.cfl.max_halvings = 3;
  st.moving_mesh = false;
  Simulation<ScalarModel> sim(ScalarModel::advection(1.0), mesh, std::vector<State<1>>(10, State<1>{0.5}), st,
                              no_monitor<ScalarModel>());
  CHECK_THROWS_AS(sim.step(1.0), HalvingLimitError);
  st.cfl.max_halvings = 6;
  Simulation<ScalarModel> ok(ScalarModel::advection(1.0), mesh, std::vector<State<1>>(10, State<1>{0.5}), st,
                             no_monitor<ScalarModel>());
  CHECK(ok.step(1.0).halvings == 6);
}

TEST_CASE("final step lands on t_final") {
  const auto mesh = MeshState::uniform(0.0, 1.0, 10);
  StepSettings st;
  Simulation<ScalarModel> sim(ScalarModel::advection(1.0), mesh, std::vector<State<1>>(10, State<1>{0.5}), st,
                              noise_monitor<ScalarModel>(3));
  const double t_final = 0.1234567;
  while (sim.time() < t_final) sim.step(t_final);
  CHECK(sim.time() == t_final);
  CHECK_THROWS(sim.step(t_final));
}

TEST_CASE("construction guards") {
  const auto mesh = MeshState::uniform(0.0, 1.0, 4);
  CHECK_THROWS(Simulation<ScalarModel>(ScalarModel::burgers(), mesh, std::vector<State<1>>(4), StepSettings{},
                                       no_monitor<ScalarModel>()));
  const FiveEqModel model({1.4, 0.0}, {4.4, 6e8});
  const auto m10 = MeshState::uniform(0.0, 1.0, 10);
  StepSettings periodic;
  CHECK_THROWS_AS(Simulation<FiveEqModel>(model, m10,
                                          std::vector<State<5>>(10, model.from_primitive(1, 1000, 0, 1e5, 0.5)),
                                          periodic, no_monitor<FiveEqModel>()),
                  ConfigError);
}

TEST_CASE("near-vacuum double rarefaction") {
  // u_R - u_L exceeds 2 (c_L + c_R) / (gamma - 1): the exact solution contains vacuum.
  const EulerModel model(1.4);
  const auto mesh = MeshState::uniform(-1.0, 1.0, 100);
  std::vector<State<3>> init(100);
  for (int j = 0; j < 100; ++j) init[j] = model.from_primitive(1.0, j < 50 ? -2.0 : 2.0, 0.1);
  auto run = [&](bool limiter) {
    StepSettings st;
    st.boundary = BoundaryKind::Free;
    st.moving_mesh = false;
    st.limiter = limiter;
    Simulation<EulerModel> sim(model, mesh, init, st, no_monitor<EulerModel>());
    double rho = 1.0, p = 1.0;
    while (sim.time() < 0.3) {
      const auto d = sim.step(0.3);
      rho = std::min(rho, d.quantity_min[0]);
      p = std::min(p, d.quantity_min[1]);
    }
    return std::pair{rho, p};
  };
  CHECK_THROWS_AS(run(false), AdmissibilityError);
  const auto [rho, p] = run(true);
  CHECK(rho > 0.0);
  CHECK(p > 0.0);
}
