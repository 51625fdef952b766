#pragma once

#include <array>
#include <span>
#include <vector>

namespace ammbp::weno {

// Five consecutive cells C_{j-2}, ..., C_{j+2}; the target cell sits at index 2.
struct Stencil {
  std::array<double, 5> averages{};
  std::array<double, 5> sizes{};
};

// Coefficients of c0 + c1*s + c2*s^2 with s = x - x_j.
struct Quadratic {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double operator()(double s) const { return c0 + s * (c1 + s * c2); }
};

struct CellReconstruction {
  double left_value = 0.0;   // at x_{j-1/2}^+
  double mid_value = 0.0;    // at x_j
  double right_value = 0.0;  // at x_{j+1/2}^-
  std::array<double, 3> weights{};
};

inline constexpr std::array<double, 3> kLinearWeights{0.25, 0.5, 0.25};
inline constexpr double kEpsilon = 1e-12;
inline constexpr double kScaleFloor = 1e-40;

// Quadratic matching the averages of sub-stencil {j-k, j-k+1, j-k+2}.
Quadratic candidate_polynomial(int k, const Stencil& stencil);

// Jiang-Shu indicator of a quadratic on a cell of size dx, integrated exactly.
double smoothness_indicator(const Quadratic& p, double dx);

// mu = 1e-40 + mean absolute deviation of the five averages.
double affine_scale(const Stencil& stencil);

CellReconstruction reconstruct(const Stencil& stencil);

// Reconstruction of a d-component state in the eigenvector basis: `left`
// projects conserved states onto characteristic fields, `right` maps back.
// Both are row-major d x d. Returns one reconstruction per component.
std::vector<CellReconstruction> reconstruct_characteristic(std::span<const std::vector<double>> stencil_states,
                                                           const std::array<double, 5>& sizes,
                                                           std::span<const double> left,
                                                           std::span<const double> right);

}  // namespace ammbp::weno
