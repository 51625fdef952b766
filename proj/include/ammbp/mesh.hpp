#pragma once

#include <span>
#include <utility>
#include <vector>

namespace ammbp {

// Grid of N cells on [a, b]. Nodes are x_{1/2}, ..., x_{N+1/2} stored 0-based.
class MeshState {
 public:
  MeshState() = default;
  // Validates strict monotonicity and pinned endpoints; cell sizes are derived.
  explicit MeshState(std::vector<double> nodes);

  static MeshState uniform(double a, double b, int cells);

  int cells() const { return static_cast<int>(sizes_.size()); }
  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> sizes() const { return sizes_; }
  double center(int j) const { return 0.5 * (nodes_[j] + nodes_[j + 1]); }
  std::vector<double> centers() const;
  double min_size() const;
  double max_size() const;

 private:
  std::vector<double> nodes_;
  std::vector<double> sizes_;
};

// Node velocities for one time step; endpoints stay at rest.
struct MeshMotion {
  std::vector<double> velocities;
  double dt = 0.0;
};

struct MonitorSettings {
  double beta = 0.6;
  int smoothing_steps = 8;
  int jacobi_steps = 8;
  double min_cell_factor = 20.0;

  void validate() const;
};

// Applies the (1, 2, 1)/4 kernel `steps` times with replicated end values.
std::vector<double> smooth_monitor(std::span<const double> raw, int steps);

// sigma_j = 1 + alpha * phi_j with alpha scaled so that a fraction beta of the
// nodes concentrates where phi is large. Degenerate phi gives sigma = 1.
std::vector<double> monitor_function(std::span<const double> phi, const MeshState& mesh, double beta);

// Jacobi sweeps for (sigma x_xi)_xi = 0 starting from the current nodes.
std::vector<double> equidistribute(const MeshState& mesh, std::span<const double> sigma, int sweeps);

// max_j |sigma_{j+1} dx_{j+1} - sigma_j dx_j| over inner nodes.
double equidistribution_residual(std::span<const double> nodes, std::span<const double> sigma);

struct LimitedNodes {
  std::vector<double> nodes;
  std::vector<bool> reset_flags;
};

// Step 1 clamps each inner node between the neighbouring previous cell
// centres; step 2 restores both endpoints of any cell thinner than dx_min and
// flags it together with its neighbours.
LimitedNodes limit_mesh(std::span<const double> candidate, const MeshState& previous, double dx_min);

MeshMotion grid_velocities(std::span<const double> old_nodes, std::span<const double> new_nodes, double dt);

// One SSP-RK3 stage of the cell-size ODE. `xi` is 0, 3/4 or 1/3.
std::vector<double> advance_cell_sizes(std::span<const double> dx_prev_stage, std::span<const double> dx_n,
                                       const MeshMotion& motion, double xi);

// Node positions at the end of stage 1, 2 or 3.
std::vector<double> stage_node_positions(std::span<const double> old_nodes, const MeshMotion& motion, int stage);

// Second-order first and second derivatives at cell centres from cell values,
// using the three-point Lagrange stencil (one-sided at the two ends).
struct Derivatives {
  std::vector<double> first;
  std::vector<double> second;
};
Derivatives cell_derivatives(std::span<const double> values, std::span<const double> centers);

}  // namespace ammbp
