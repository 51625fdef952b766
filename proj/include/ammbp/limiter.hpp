#pragma once

#include <optional>
#include <span>

#include "ammbp/systems/euler.hpp"
#include "ammbp/systems/five_eq.hpp"
#include "ammbp/types.hpp"

namespace ammbp::limiter {

inline constexpr double kEpsBP = 1e-16;
// Positivity floors for the system limiters are this fraction of the
// low-order value of the constrained quantity.
inline constexpr double kRelativeFloor = 1e-13;
inline constexpr int kBisectionSteps = 40;

struct Bounds {
  double lower = 0.0;
  double upper = 1.0;
  bool has_lower = true;
  bool has_upper = true;
};

// Largest blend weight for a high-order value phi_high that keeps
// theta*phi_high + (1-theta)*phi_low >= eps, given phi_low >= eps.
// Returns 1 if phi_high >= 0 and 0 if phi_low <= eps.
double theta_ratio(double phi_high, double phi_low, double eps = kEpsBP);

// One sub-cell scheme value pair seen from an interface.
template <std::size_t D>
struct SubCellSide {
  State<D> high;
  State<D> low;
};

// Blend weight keeping one scalar sub-cell value inside `bounds`. Throws
// AdmissibilityError if the low-order value itself is out of bounds.
double theta_scalar_side(double high, double low, const Bounds& bounds, double eps = kEpsBP);

// theta_{j+1/2} = min(theta from cell j's `+` scheme, theta from cell j+1's `-` scheme).
double theta_interface_scalar(double uH_plus_j, double uL_plus_j, double uH_minus_j1, double uL_minus_j1,
                              const Bounds& bounds, double eps = kEpsBP);

template <std::size_t D>
State<D> blend_flux(const State<D>& high, const State<D>& low, double theta) {
  if (theta == 1.0) return high;
  if (theta == 0.0) return low;
  State<D> r;
  for (std::size_t k = 0; k < D; ++k) r[k] = theta * high[k] + (1.0 - theta) * low[k];
  return r;
}

// Density first, then pressure on the density-safe blend. The returned weight
// is the product of the two stages. `sides` holds one or two sub-cell pairs.
double euler_positivity(std::span<const SubCellSide<3>> sides, const EulerModel& model);

// Partial densities and the volume-fraction bounds first, then rho*e - pi_inf.
double five_eq_bounds(std::span<const SubCellSide<5>> sides, const FiveEqModel& model);

}  // namespace ammbp::limiter
