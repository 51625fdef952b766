#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <type_traits>
#include <vector>

#include "ammbp/limiter.hpp"
#include "ammbp/mesh.hpp"
#include "ammbp/systems/euler.hpp"
#include "ammbp/systems/five_eq.hpp"
#include "ammbp/systems/lax_friedrichs.hpp"
#include "ammbp/systems/scalar.hpp"
#include "ammbp/types.hpp"
#include "ammbp/weno.hpp"

namespace ammbp {

struct CflPolicy {
  double cfl = 0.16;
  double bp_limit = 0.5;
  double ap_limit = 1.0 / 6.0;
  int max_halvings = 30;
  double alpha_floor = 1e-12;
};

inline constexpr std::array<double, 3> kStageXi{0.0, 0.75, 1.0 / 3.0};
inline constexpr int kGhosts = 3;

struct StepSettings {
  CflPolicy cfl;
  bool limiter = true;
  bool moving_mesh = true;
  BoundaryKind boundary = BoundaryKind::Periodic;
  MonitorSettings monitor;
  limiter::Bounds bounds;  // scalar models only
};

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  int halvings = 0;
  double theta_min = 1.0;
  long active_interfaces = 0;
  std::vector<double> quantity_min;
  std::vector<double> quantity_max;
};

// Everything one RK stage computes before the update. Interfaces are indexed
// 0..N, cells 0..N-1.
template <class Model>
struct StageData {
  using S = typename Model::StateT;
  double alpha = 0.0;
  std::vector<double> lambda;
  std::vector<double> moved_sizes;  // Dx^(l-1) + dt (w_R - w_L)
  std::vector<S> high_flux, low_flux;
  std::vector<S> high_aux, low_aux;
  std::vector<S> high_minus, high_plus, low_minus, low_plus;  // sub-cell states
  std::vector<double> theta;
  std::vector<S> blended_flux;
  std::vector<char> fallback;  // cells whose reconstruction reverted to the average
};

namespace detail {

template <class Model>
constexpr bool is_five_eq = std::is_same_v<Model, FiveEqModel>;

inline int wrap(int j, int n) { return ((j % n) + n) % n; }

}  // namespace detail

template <class Model>
double nominal_dt(const Model& model, std::span<const typename Model::StateT> cells, const MeshState& mesh,
                  const CflPolicy& policy) {
  const double alpha = std::max(model.nominal_alpha(cells), policy.alpha_floor);
  return policy.cfl * mesh.min_size() / alpha;
}

// Cell j of the extended array sits at index j + kGhosts.
template <class Model>
void extend(std::span<const typename Model::StateT> cells, std::span<const double> sizes, BoundaryKind kind,
            std::vector<typename Model::StateT>& ext, std::vector<double>& ext_sizes) {
  const int n = static_cast<int>(cells.size());
  ext.resize(n + 2 * kGhosts);
  ext_sizes.resize(n + 2 * kGhosts);
  for (int e = 0; e < n + 2 * kGhosts; ++e) {
    const int j = e - kGhosts;
    if (j >= 0 && j < n) {
      ext[e] = cells[j];
      ext_sizes[e] = sizes[j];
    } else if (kind == BoundaryKind::Periodic) {
      ext[e] = cells[detail::wrap(j, n)];
      ext_sizes[e] = sizes[detail::wrap(j, n)];
    } else {
      const int inner = j < 0 ? 0 : n - 1;
      const int mirror = j < 0 ? std::min(n - 1, -j - 1) : std::max(0, 2 * n - 1 - j);
      ext[e] = cells[inner];
      ext_sizes[e] = sizes[mirror];
    }
  }
}

template <class Model>
struct PointValues {
  typename Model::StateT left, mid, right;
};

// Reconstructs cells -1..N (N+2 entries) from the extended arrays.
template <class Model>
std::vector<PointValues<Model>> reconstruct_cells(const Model& model, const std::vector<typename Model::StateT>& ext,
                                                  const std::vector<double>& ext_sizes, std::vector<char>* fallback) {
  constexpr std::size_t d = Model::kVars;
  const int n = static_cast<int>(ext.size()) - 2 * kGhosts;
  std::vector<PointValues<Model>> out(n + 2);
  if (fallback) fallback->assign(n + 2, 0);
  std::vector<double> left, right;
  std::array<std::vector<double>, 5> stencil_states;
  for (auto& v : stencil_states) v.resize(d);
  for (int j = -1; j <= n; ++j) {
    const int e = j + kGhosts;
    std::array<double, 5> sizes;
    for (int l = 0; l < 5; ++l) sizes[l] = ext_sizes[e - 2 + l];
    PointValues<Model> pv;
    if constexpr (d == 1) {
      weno::Stencil st;
      st.sizes = sizes;
      for (int l = 0; l < 5; ++l) st.averages[l] = ext[e - 2 + l][0];
      const auto r = weno::reconstruct(st);
      pv.left = {r.left_value};
      pv.mid = {r.mid_value};
      pv.right = {r.right_value};
    } else {
      for (int l = 0; l < 5; ++l) {
        for (std::size_t k = 0; k < d; ++k) stencil_states[l][k] = ext[e - 2 + l][k];
      }
      model.basis(ext[e], left, right);
      const auto r = weno::reconstruct_characteristic(stencil_states, sizes, left, right);
      for (std::size_t k = 0; k < d; ++k) {
        pv.left[k] = r[k].left_value;
        pv.mid[k] = r[k].mid_value;
        pv.right[k] = r[k].right_value;
      }
      if (!model.reconstruction_usable(pv.left) || !model.reconstruction_usable(pv.mid) ||
          !model.reconstruction_usable(pv.right)) {
        pv.left = pv.mid = pv.right = ext[e];
        if (fallback) (*fallback)[j + 1] = 1;
      }
    }
    out[j + 1] = pv;
  }
  return out;
}

// High- and low-order interface fluxes plus the per-cell terms standing in for
// H(omega, u_j, u_j) + omega u_j in the sub-cell schemes.
template <class Model>
void interface_fluxes(const Model& model, const std::vector<typename Model::StateT>& ext,
                      const std::vector<PointValues<Model>>& rec, std::span<const double> omega, double alpha,
                      StageData<Model>& sd) {
  using S = typename Model::StateT;
  const int n = static_cast<int>(ext.size()) - 2 * kGhosts;
  sd.high_flux.resize(n + 1);
  sd.low_flux.resize(n + 1);
  sd.high_aux.resize(n);
  sd.low_aux.resize(n);
  auto avg = [&](int j) -> const S& { return ext[j + kGhosts]; };

  if constexpr (detail::is_five_eq<Model>) {
    std::vector<S> hm(n + 1), hp(n + 1), lm(n + 1), lp(n + 1);
    std::vector<S> cl(n), cm(n), cr(n), al(n);
    for (int i = 0; i <= n; ++i) {
      hm[i] = rec[i].right;  // cell i-1
      hp[i] = rec[i + 1].left;
      lm[i] = avg(i - 1);
      lp[i] = avg(i);
    }
    for (int j = 0; j < n; ++j) {
      cl[j] = rec[j + 1].left;
      cm[j] = rec[j + 1].mid;
      cr[j] = rec[j + 1].right;
      al[j] = avg(j);
    }
    const auto gh = assemble_global_flux(model, hm, hp, cl, cm, cr, alpha);
    const auto gl = assemble_global_flux(model, lm, lp, al, al, al, alpha);
    for (int i = 0; i <= n; ++i) {
      if (std::abs(gl.u_star[i]) > alpha * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "|u*| = " << std::abs(gl.u_star[i]) << " exceeds alpha = " << alpha << " at interface " << i;
        throw AdmissibilityError(msg.str());
      }
      sd.high_flux[i] = five_eq_interface_flux(gh.k_minus[i], gh.k_plus[i], hm[i], hp[i], alpha, omega[i]);
      sd.low_flux[i] = five_eq_interface_flux(gl.k_minus[i], gl.k_plus[i], lm[i], lp[i], alpha, omega[i]);
    }
    for (int j = 0; j < n; ++j) {
      const S f = model.flux(avg(j));
      sd.high_aux[j] = f;
      sd.high_aux[j][4] -= gh.r_cell[j];
      sd.low_aux[j] = f;
      sd.low_aux[j][4] -= gl.r_cell[j];
    }
  } else {
    for (int i = 0; i <= n; ++i) {
      sd.high_flux[i] = lf_flux(model, omega[i], rec[i].right, rec[i + 1].left, alpha);
      sd.low_flux[i] = lf_flux(model, omega[i], avg(i - 1), avg(i), alpha);
    }
    for (int j = 0; j < n; ++j) sd.high_aux[j] = sd.low_aux[j] = model.flux(avg(j));
  }
}

// u^{+} = u - 2 lambda [H_{j+1/2} - (A_j - w_{j+1/2} u)], u^{-} = u + 2 lambda [H_{j-1/2} - (A_j - w_{j-1/2} u)].
template <class Model>
void sub_cell_states(std::span<const typename Model::StateT> cells, std::span<const typename Model::StateT> flux,
                     std::span<const typename Model::StateT> aux, std::span<const double> omega,
                     std::span<const double> lambda, std::vector<typename Model::StateT>& minus,
                     std::vector<typename Model::StateT>& plus) {
  const std::size_t n = cells.size();
  minus.resize(n);
  plus.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double l2 = 2.0 * lambda[j];
    for (std::size_t k = 0; k < Model::kVars; ++k) {
      const double u = cells[j][k];
      plus[j][k] = u - l2 * (flux[j + 1][k] - (aux[j][k] - omega[j + 1] * u));
      minus[j][k] = u + l2 * (flux[j][k] - (aux[j][k] - omega[j] * u));
    }
  }
}

template <class Model>
double interface_theta(const Model& model, std::span<const limiter::SubCellSide<Model::kVars>> sides,
                       const limiter::Bounds& bounds) {
  if constexpr (std::is_same_v<Model, ScalarModel>) {
    double t = 1.0;
    for (const auto& s : sides) t = std::min(t, limiter::theta_scalar_side(s.high[0], s.low[0], bounds));
    return t;
  } else if constexpr (std::is_same_v<Model, EulerModel>) {
    return limiter::euler_positivity(sides, model);
  } else {
    return limiter::five_eq_bounds(sides, model);
  }
}

template <class Model>
void limit_interfaces(const Model& model, BoundaryKind kind, bool enabled, const limiter::Bounds& bounds,
                      StageData<Model>& sd) {
  using Side = limiter::SubCellSide<Model::kVars>;
  const int n = static_cast<int>(sd.high_plus.size());
  sd.theta.assign(n + 1, 1.0);
  if (enabled) {
    std::vector<Side> sides;
    for (int i = 0; i <= n; ++i) {
      if (kind == BoundaryKind::Periodic && i == n) {
        sd.theta[n] = sd.theta[0];
        continue;
      }
      sides.clear();
      const int lc = (kind == BoundaryKind::Periodic && i == 0) ? n - 1 : i - 1;
      if (lc >= 0) sides.push_back({sd.high_plus[lc], sd.low_plus[lc]});
      if (i < n) sides.push_back({sd.high_minus[i], sd.low_minus[i]});
      sd.theta[i] = interface_theta<Model>(model, sides, bounds);
    }
  }
  sd.blended_flux.resize(n + 1);
  for (int i = 0; i <= n; ++i) sd.blended_flux[i] = limiter::blend_flux(sd.high_flux[i], sd.low_flux[i], sd.theta[i]);
}

// Dx^(l) u^(l) = xi Dx^n u^n + (1 - xi) {Dx^(l-1) u^(l-1) - dt [H_{j+1/2} - H_{j-1/2}]
//                + dt (theta_{j+1/2} - theta_{j-1/2}) (A^H_j - A^L_j)}.
// The last term vanishes for conservative models.
template <class Model>
std::vector<typename Model::StateT> stage_update(std::span<const typename Model::StateT> prev,
                                                 std::span<const double> prev_sizes,
                                                 std::span<const typename Model::StateT> base,
                                                 std::span<const double> base_sizes, const StageData<Model>& sd,
                                                 double dt, double xi, std::span<const double> new_sizes) {
  const std::size_t n = prev.size();
  std::vector<typename Model::StateT> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(sd.moved_sizes[j] > 0.0)) {
      std::ostringstream msg;
      msg << "cell " << j << ": Dx + dt (w_R - w_L) = " << sd.moved_sizes[j] << " <= 0";
      throw std::runtime_error(msg.str());
    }
    const double dtheta = sd.theta[j + 1] - sd.theta[j];
    for (std::size_t k = 0; k < Model::kVars; ++k) {
      double moved = prev_sizes[j] * prev[j][k] - dt * (sd.blended_flux[j + 1][k] - sd.blended_flux[j][k]);
      if (dtheta != 0.0) moved += dt * dtheta * (sd.high_aux[j][k] - sd.low_aux[j][k]);
      out[j][k] = (xi * base_sizes[j] * base[j][k] + (1.0 - xi) * moved) / new_sizes[j];
    }
  }
  return out;
}

// Supplies the raw monitor phi^0 from the current mesh and averages.
template <class Model>
using MonitorFn = std::function<std::vector<double>(const MeshState&, std::span<const typename Model::StateT>)>;

template <class Model>
class Simulation {
 public:
  using S = typename Model::StateT;

  Simulation(Model model, MeshState mesh, std::vector<S> values, StepSettings settings, MonitorFn<Model> monitor,
             double t0 = 0.0)
      : model_(std::move(model)),
        mesh_(std::move(mesh)),
        values_(std::move(values)),
        settings_(settings),
        monitor_(std::move(monitor)),
        t_(t0),
        reset_flags_(values_.size(), false) {
    if (static_cast<int>(values_.size()) != mesh_.cells()) throw std::invalid_argument("field/mesh size mismatch");
    if (mesh_.cells() < 5) throw std::invalid_argument("at least five cells are required");
    if constexpr (detail::is_five_eq<Model>) {
      if (settings_.boundary == BoundaryKind::Periodic) throw ConfigError("five-equation runs need free boundaries");
    }
    settings_.monitor.validate();
  }

  const Model& model() const { return model_; }
  const MeshState& mesh() const { return mesh_; }
  const std::vector<S>& values() const { return values_; }
  double time() const { return t_; }
  long steps() const { return step_; }
  const StepSettings& settings() const { return settings_; }

  // Advances one step, landing exactly on t_final if it is within reach.
  StepDiagnostics step(double t_final) {
    const double dt = nominal_dt<Model>(model_, values_, mesh_, settings_.cfl);
    if (!(t_final > t_)) throw std::runtime_error("no time left to advance");
    // Velocities come from the nominal step; a clipped last step moves the
    // nodes the corresponding fraction of the way to their targets.
    MeshMotion motion = plan_motion(dt);
    bool clipped = false;
    if (t_ + dt >= t_final) {
      motion.dt = t_final - t_;
      clipped = true;
    }
    StepDiagnostics diag;
    diag.quantity_min.assign(Model::quantity_names().size(), std::numeric_limits<double>::infinity());
    diag.quantity_max.assign(Model::quantity_names().size(), -std::numeric_limits<double>::infinity());

    for (;;) {
      StepDiagnostics attempt = diag;
      std::vector<S> result;
      if (try_step(motion, attempt, result)) {
        values_ = std::move(result);
        mesh_ = MeshState(stage_node_positions(mesh_.nodes(), motion, 3));
        ++step_;
        t_ = clipped ? t_final : t_ + motion.dt;
        // A remainder at rounding level would otherwise need its own step.
        if (t_final - t_ <= 16.0 * std::numeric_limits<double>::epsilon() * std::abs(t_final)) t_ = t_final;
        attempt.step = step_;
        attempt.t = t_;
        attempt.dt = motion.dt;
        attempt.halvings = diag.halvings;
        return attempt;
      }
      if (++diag.halvings > settings_.cfl.max_halvings) {
        std::ostringstream msg;
        msg << "accuracy-preserving CFL not met after " << settings_.cfl.max_halvings << " halvings at t = " << t_;
        throw HalvingLimitError(msg.str());
      }
      motion.dt *= 0.5;
      clipped = false;
    }
  }

  // Last stage data, kept for inspection by tests.
  const StageData<Model>& last_stage() const { return last_stage_; }

 private:
  MeshMotion plan_motion(double dt) {
    const int n = mesh_.cells();
    if (!settings_.moving_mesh) return MeshMotion{std::vector<double>(n + 1, 0.0), dt};
    auto phi = monitor_(mesh_, values_);
    for (int j = 0; j < n; ++j) {
      if (reset_flags_[j]) phi[j] = 0.0;
    }
    const auto& ms = settings_.monitor;
    phi = smooth_monitor(phi, ms.smoothing_steps);
    const auto sigma = monitor_function(phi, mesh_, ms.beta);
    const auto candidate = equidistribute(mesh_, sigma, ms.jacobi_steps);
    const double dx_min = (mesh_.b() - mesh_.a()) / n / ms.min_cell_factor;
    auto limited = limit_mesh(candidate, mesh_, dx_min);
    reset_flags_ = limited.reset_flags;
    MeshMotion motion = grid_velocities(mesh_.nodes(), limited.nodes, dt);
    if constexpr (detail::is_five_eq<Model>) {
      const double a = model_.alpha(values_);
      for (double& w : motion.velocities) w = clamp_velocity(w, a);
    }
    return motion;
  }

  // Runs the three stages; false means the step must be retried with dt/2.
  bool try_step(const MeshMotion& motion, StepDiagnostics& diag, std::vector<S>& out) {
    const int n = mesh_.cells();
    const double dt = motion.dt;
    const auto& w = motion.velocities;
    const std::vector<double> base_sizes(mesh_.sizes().begin(), mesh_.sizes().end());
    std::vector<S> cur = values_;
    std::vector<double> cur_sizes = base_sizes;
    std::vector<S> ext;
    std::vector<double> ext_sizes;

    for (int stage = 0; stage < 3; ++stage) {
      StageData<Model> sd;
      sd.alpha = std::max(model_.stage_alpha(cur, w), settings_.cfl.alpha_floor);
      sd.lambda.resize(n);
      sd.moved_sizes.resize(n);
      for (int j = 0; j < n; ++j) {
        sd.moved_sizes[j] = cur_sizes[j] + dt * (w[j + 1] - w[j]);
        if (!(sd.moved_sizes[j] > 0.0)) return false;
        sd.lambda[j] = dt / sd.moved_sizes[j];
        if (sd.lambda[j] * sd.alpha > settings_.cfl.ap_limit) return false;
      }

      extend<Model>(cur, cur_sizes, settings_.boundary, ext, ext_sizes);
      std::vector<char> fallback;
      const auto rec = reconstruct_cells(model_, ext, ext_sizes, &fallback);
      sd.fallback = fallback;
      interface_fluxes(model_, ext, rec, w, sd.alpha, sd);
      sub_cell_states<Model>(cur, sd.high_flux, sd.high_aux, w, sd.lambda, sd.high_minus, sd.high_plus);
      sub_cell_states<Model>(cur, sd.low_flux, sd.low_aux, w, sd.lambda, sd.low_minus, sd.low_plus);
      limit_interfaces(model_, settings_.boundary, settings_.limiter, settings_.bounds, sd);

      const auto new_sizes = advance_cell_sizes(cur_sizes, base_sizes, motion, kStageXi[stage]);
      auto next = stage_update<Model>(cur, cur_sizes, values_, base_sizes, sd, dt, kStageXi[stage], new_sizes);

      for (int j = 0; j < n; ++j) {
        if (auto why = model_.inadmissible_reason(next[j])) {
          std::ostringstream msg;
          msg << "stage " << stage + 1 << ", cell " << j << " (x = " << mesh_.center(j) << "), t = " << t_
              << ": " << *why;
          throw AdmissibilityError(msg.str());
        }
        const auto q = model_.quantities(next[j]);
        for (std::size_t k = 0; k < q.size(); ++k) {
          diag.quantity_min[k] = std::min(diag.quantity_min[k], q[k]);
          diag.quantity_max[k] = std::max(diag.quantity_max[k], q[k]);
        }
      }
      for (double th : sd.theta) {
        diag.theta_min = std::min(diag.theta_min, th);
        if (th < 1.0) ++diag.active_interfaces;
      }
      cur = std::move(next);
      cur_sizes = new_sizes;
      last_stage_ = std::move(sd);
    }
    out = std::move(cur);
    return true;
  }

  Model model_;
  MeshState mesh_;
  std::vector<S> values_;
  StepSettings settings_;
  MonitorFn<Model> monitor_;
  double t_ = 0.0;
  long step_ = 0;
  std::vector<bool> reset_flags_;
  StageData<Model> last_stage_;
};

}  // namespace ammbp
