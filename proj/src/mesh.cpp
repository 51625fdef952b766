#include "ammbp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ammbp {

MeshState::MeshState(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("mesh needs at least one cell");
  sizes_.resize(nodes_.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
    sizes_[j] = nodes_[j + 1] - nodes_[j];
    if (!(sizes_[j] > 0.0)) {
      std::ostringstream msg;
      msg << "mesh nodes not strictly increasing at cell " << j;
      throw std::invalid_argument(msg.str());
    }
  }
}

MeshState MeshState::uniform(double a, double b, int cells) {
  if (cells < 1 || !(b > a)) throw std::invalid_argument("invalid uniform mesh request");
  std::vector<double> nodes(cells + 1);
  const double h = (b - a) / cells;
  for (int i = 0; i <= cells; ++i) nodes[i] = a + h * i;
  nodes.back() = b;
  return MeshState(std::move(nodes));
}

std::vector<double> MeshState::centers() const {
  std::vector<double> c(sizes_.size());
  for (int j = 0; j < cells(); ++j) c[j] = center(j);
  return c;
}

double MeshState::min_size() const { return *std::min_element(sizes_.begin(), sizes_.end()); }
double MeshState::max_size() const { return *std::max_element(sizes_.begin(), sizes_.end()); }

void MonitorSettings::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("monitor beta must lie in (0,1)");
  if (smoothing_steps < 0 || jacobi_steps < 0) throw std::invalid_argument("monitor step counts must be >= 0");
  if (!(min_cell_factor > 0.0)) throw std::invalid_argument("min_cell_factor must be positive");
}

std::vector<double> smooth_monitor(std::span<const double> raw, int steps) {
  std::vector<double> cur(raw.begin(), raw.end());
  const std::size_t n = cur.size();
  if (n == 0) return cur;
  std::vector<double> next(n);
  for (int s = 0; s < steps; ++s) {
    for (std::size_t j = 0; j < n; ++j) {
      const double left = cur[j == 0 ? 0 : j - 1];
      const double right = cur[j + 1 == n ? n - 1 : j + 1];
      next[j] = 0.25 * (left + 2.0 * cur[j] + right);
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> monitor_function(std::span<const double> phi, const MeshState& mesh, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("monitor beta must lie in (0,1)");
  const auto dx = mesh.sizes();
  double integral = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) integral += phi[j] * dx[j];
  std::vector<double> sigma(phi.size(), 1.0);
  if (!(integral > 0.0)) return sigma;
  const double alpha = beta * (mesh.b() - mesh.a()) / ((1.0 - beta) * integral);
  for (std::size_t j = 0; j < phi.size(); ++j) sigma[j] = 1.0 + alpha * phi[j];
  return sigma;
}

std::vector<double> equidistribute(const MeshState& mesh, std::span<const double> sigma, int sweeps) {
  std::vector<double> x(mesh.nodes().begin(), mesh.nodes().end());
  const std::size_t n_nodes = x.size();
  std::vector<double> next = x;
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 1; i + 1 < n_nodes; ++i) {
      const double sl = sigma[i - 1];
      const double sr = sigma[i];
      next[i] = (sl * x[i - 1] + sr * x[i + 1]) / (sl + sr);
    }
    x.swap(next);
    next.front() = x.front();
    next.back() = x.back();
  }
  return x;
}

double equidistribution_residual(std::span<const double> nodes, std::span<const double> sigma) {
  double r = 0.0;
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const double left = sigma[i - 1] * (nodes[i] - nodes[i - 1]);
    const double right = sigma[i] * (nodes[i + 1] - nodes[i]);
    r = std::max(r, std::abs(right - left));
  }
  return r;
}

LimitedNodes limit_mesh(std::span<const double> candidate, const MeshState& previous, double dx_min) {
  const auto prev = previous.nodes();
  const int n = previous.cells();
  if (candidate.size() != prev.size()) throw std::invalid_argument("candidate node count mismatch");

  LimitedNodes out{std::vector<double>(candidate.begin(), candidate.end()), std::vector<bool>(n, false)};
  auto& x = out.nodes;
  x.front() = prev.front();
  x.back() = prev.back();

  // Step 1: no node may pass the centre of a neighbouring previous cell.
  for (int i = 1; i < n; ++i) {
    const double lo = previous.center(i - 1);
    const double hi = previous.center(i);
    x[i] = std::clamp(x[i], lo, hi);
  }

  // Step 2: restoring nodes can shrink a neighbour, so sweep until stable.
  // Cells whose endpoints are both restored cannot change any more.
  for (bool changed = true; changed;) {
    changed = false;
    for (int j = 0; j < n; ++j) {
      if (x[j + 1] - x[j] >= dx_min) continue;
      if (x[j] == prev[j] && x[j + 1] == prev[j + 1]) continue;
      x[j] = prev[j];
      x[j + 1] = prev[j + 1];
      for (int k = std::max(0, j - 1); k <= std::min(n - 1, j + 1); ++k) out.reset_flags[k] = true;
      changed = true;
    }
  }

  for (int j = 0; j < n; ++j) {
    if (!(x[j + 1] > x[j])) {
      std::ostringstream msg;
      msg << "limited mesh is not monotone at cell " << j << " (check dx_min)";
      throw std::runtime_error(msg.str());
    }
  }
  return out;
}

MeshMotion grid_velocities(std::span<const double> old_nodes, std::span<const double> new_nodes, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("grid_velocities requires dt > 0");
  if (old_nodes.size() != new_nodes.size()) throw std::invalid_argument("node count mismatch");
  MeshMotion m{std::vector<double>(old_nodes.size(), 0.0), dt};
  for (std::size_t i = 1; i + 1 < old_nodes.size(); ++i) m.velocities[i] = (new_nodes[i] - old_nodes[i]) / dt;
  return m;
}

std::vector<double> advance_cell_sizes(std::span<const double> dx_prev_stage, std::span<const double> dx_n,
                                       const MeshMotion& motion, double xi) {
  const auto& w = motion.velocities;
  std::vector<double> out(dx_prev_stage.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double moved = dx_prev_stage[j] + motion.dt * (w[j + 1] - w[j]);
    out[j] = xi * dx_n[j] + (1.0 - xi) * moved;
    if (!(out[j] > 0.0)) {
      std::ostringstream msg;
      msg << "cell " << j << " size became non-positive (" << out[j] << "); time step too large";
      throw std::runtime_error(msg.str());
    }
  }
  return out;
}

std::vector<double> stage_node_positions(std::span<const double> old_nodes, const MeshMotion& motion, int stage) {
  if (stage < 1 || stage > 3) throw std::invalid_argument("stage must be 1, 2 or 3");
  const double tau = stage == 2 ? 0.5 * motion.dt : motion.dt;
  std::vector<double> x(old_nodes.begin(), old_nodes.end());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += tau * motion.velocities[i];
  return x;
}

Derivatives cell_derivatives(std::span<const double> values, std::span<const double> centers) {
  const std::size_t n = values.size();
  Derivatives d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (n < 3) return d;
  for (std::size_t j = 0; j < n; ++j) {
    // Three-point stencil k-1, k, k+1 and the evaluation point j within it.
    const std::size_t k = std::clamp<std::size_t>(j, 1, n - 2);
    const double x0 = centers[k - 1], x1 = centers[k], x2 = centers[k + 1];
    const double f0 = values[k - 1], f1 = values[k], f2 = values[k + 1];
    const double d01 = (f1 - f0) / (x1 - x0);
    const double d12 = (f2 - f1) / (x2 - x1);
    const double second = 2.0 * (d12 - d01) / (x2 - x0);
    // p'(x) = d01 + second/2 * ((x - x0) + (x - x1))
    const double x = centers[j];
    d.first[j] = d01 + 0.5 * second * ((x - x0) + (x - x1));
    d.second[j] = second;
  }
  return d;
}

}  // namespace ammbp
