#include "ammbp/weno.hpp"

#include <cmath>
#include <stdexcept>

#include "ammbp/linalg.hpp"

namespace ammbp::weno {
namespace {

// Offsets of the five cell centres from the target centre, in units of the
// target cell size.
std::array<double, 5> scaled_offsets(const std::array<double, 5>& h) {
  std::array<double, 5> t{};
  const double hj = h[2];
  t[2] = 0.0;
  t[3] = 0.5 * (h[2] + h[3]) / hj;
  t[4] = t[3] + 0.5 * (h[3] + h[4]) / hj;
  t[1] = -0.5 * (h[2] + h[1]) / hj;
  t[0] = t[1] - 0.5 * (h[1] + h[0]) / hj;
  return t;
}

}  // namespace

Quadratic candidate_polynomial(int k, const Stencil& stencil) {
  if (k < 0 || k > 2) throw std::invalid_argument("candidate index must be 0, 1 or 2");
  const auto& h = stencil.sizes;
  for (double v : h) {
    if (!(v > 0.0)) throw std::invalid_argument("stencil cell sizes must be positive");
  }
  const auto t = scaled_offsets(h);
  const double hj = h[2];
  const double base = stencil.averages[2];

  // Rows: average of (1, t, t^2) over each cell equals the shifted data.
  std::array<double, 9> a{};
  std::array<double, 3> rhs{};
  for (int r = 0; r < 3; ++r) {
    const int idx = 2 - k + r;
    const double w = h[idx] / hj;
    a[3 * r + 0] = 1.0;
    a[3 * r + 1] = t[idx];
    a[3 * r + 2] = t[idx] * t[idx] + w * w / 12.0;
    rhs[r] = stencil.averages[idx] - base;
  }
  const auto c = linalg::solve3(a, rhs);
  return Quadratic{base + c[0], c[1] / hj, c[2] / (hj * hj)};
}

double smoothness_indicator(const Quadratic& p, double dx) {
  // p' = c1 + 2 c2 s and p'' = 2 c2 on s in [-dx/2, dx/2]:
  //   dx * int (p')^2 = c1^2 dx^2 + c2^2 dx^4 / 3
  //   dx^3 * int (p'')^2 = 4 c2^2 dx^4
  const double d2 = dx * dx;
  return p.c1 * p.c1 * d2 + (13.0 / 3.0) * p.c2 * p.c2 * d2 * d2;
}

double affine_scale(const Stencil& stencil) {
  double mean = 0.0;
  for (double v : stencil.averages) mean += v;
  mean /= 5.0;
  double dev = 0.0;
  for (double v : stencil.averages) dev += std::abs(v - mean);
  return kScaleFloor + dev / 5.0;
}

CellReconstruction reconstruct(const Stencil& stencil) {
  std::array<Quadratic, 3> polys;
  std::array<double, 3> alpha{};
  const double mu = affine_scale(stencil);
  const double shift = mu * mu * kEpsilon;
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    polys[k] = candidate_polynomial(k, stencil);
    const double beta = smoothness_indicator(polys[k], stencil.sizes[2]);
    const double denom = beta + shift;
    alpha[k] = kLinearWeights[k] / (denom * denom);
    total += alpha[k];
  }

  CellReconstruction out;
  Quadratic blended{0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    out.weights[k] = alpha[k] / total;
    blended.c1 += out.weights[k] * polys[k].c1;
    blended.c2 += out.weights[k] * polys[k].c2;
    blended.c0 += out.weights[k] * (polys[k].c0 - stencil.averages[2]);
  }
  blended.c0 += stencil.averages[2];
  const double half = 0.5 * stencil.sizes[2];
  out.left_value = blended(-half);
  out.mid_value = blended.c0;
  out.right_value = blended(half);
  return out;
}

std::vector<CellReconstruction> reconstruct_characteristic(std::span<const std::vector<double>> stencil_states,
                                                           const std::array<double, 5>& sizes,
                                                           std::span<const double> left,
                                                           std::span<const double> right) {
  if (stencil_states.size() != 5) throw std::invalid_argument("characteristic stencil needs five states");
  const std::size_t d = stencil_states[0].size();
  if (left.size() != d * d || right.size() != d * d) throw std::invalid_argument("basis size mismatch");
  if (linalg::condition_estimate(left, right, d) > linalg::kMaxCondition) {
    throw std::runtime_error("characteristic basis is ill-conditioned");
  }

  // Fields are projected relative to the target cell so that a uniform
  // stencil reconstructs exactly.
  const auto& centre = stencil_states[2];
  std::vector<Stencil> fields(d);
  for (auto& f : fields) f.sizes = sizes;
  for (int l = 0; l < 5; ++l) {
    for (std::size_t r = 0; r < d; ++r) {
      double w = 0.0;
      for (std::size_t c = 0; c < d; ++c) w += left[r * d + c] * (stencil_states[l][c] - centre[c]);
      fields[r].averages[l] = w;
    }
  }

  std::vector<CellReconstruction> characteristic(d);
  for (std::size_t r = 0; r < d; ++r) characteristic[r] = reconstruct(fields[r]);

  std::vector<CellReconstruction> out(d);
  for (std::size_t r = 0; r < d; ++r) {
    out[r].left_value = out[r].mid_value = out[r].right_value = centre[r];
    for (std::size_t c = 0; c < d; ++c) {
      const double m = right[r * d + c];
      out[r].left_value += m * characteristic[c].left_value;
      out[r].mid_value += m * characteristic[c].mid_value;
      out[r].right_value += m * characteristic[c].right_value;
    }
    out[r].weights = characteristic[r].weights;
  }
  return out;
}

}  // namespace ammbp::weno
