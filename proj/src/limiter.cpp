#include "ammbp/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ammbp::limiter {
namespace {

template <std::size_t D>
State<D> mix(const State<D>& high, const State<D>& low, double theta) {
  return blend_flux(high, low, theta);
}

// Largest t in [0, t0] with ok(t), assuming ok(0). Tries t0 first, then bisects.
template <class Pred>
double shrink(double t0, Pred ok) {
  if (ok(t0)) return t0;
  double lo = 0.0, hi = t0;
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double m = 0.5 * (lo + hi);
    if (ok(m)) lo = m;
    else hi = m;
  }
  return lo;
}

// Theta for phi(blend) >= floor, where phi is concave along the segment.
template <std::size_t D, class Phi>
double concave_theta(const State<D>& high, const State<D>& low, Phi phi, double floor) {
  const double ph = phi(high);
  if (ph >= floor) return 1.0;
  const double pl = phi(low);
  const double t0 = theta_ratio(ph - floor, pl - floor, 0.0);
  return shrink(t0, [&](double t) { return phi(mix(high, low, t)) >= floor; });
}

}  // namespace

double theta_ratio(double phi_high, double phi_low, double eps) {
  if (phi_high >= 0.0) return 1.0;
  if (phi_low <= eps) return 0.0;
  const double denom = phi_low - phi_high;
  if (std::abs(denom) < 1e-300) return 1.0;
  return std::min(1.0, std::abs((phi_low - eps) / denom));
}

double theta_scalar_side(double high, double low, const Bounds& bounds, double eps) {
  if (bounds.has_lower && bounds.has_upper && bounds.lower > bounds.upper) {
    throw std::invalid_argument("lower bound exceeds upper bound");
  }
  auto slack = [](double b) { return 1e-13 * std::max(1.0, std::abs(b)); };
  if ((bounds.has_lower && low < bounds.lower - slack(bounds.lower)) ||
      (bounds.has_upper && low > bounds.upper + slack(bounds.upper)) || !std::isfinite(low)) {
    std::ostringstream msg;
    msg << "first-order value " << low << " violates the bounds";
    throw AdmissibilityError(msg.str());
  }
  double theta = 1.0;
  if (bounds.has_lower) theta = std::min(theta, theta_ratio(high - bounds.lower, low - bounds.lower, eps));
  if (bounds.has_upper) theta = std::min(theta, theta_ratio(bounds.upper - high, bounds.upper - low, eps));
  return theta;
}

double theta_interface_scalar(double uH_plus_j, double uL_plus_j, double uH_minus_j1, double uL_minus_j1,
                              const Bounds& bounds, double eps) {
  return std::min(theta_scalar_side(uH_plus_j, uL_plus_j, bounds, eps),
                  theta_scalar_side(uH_minus_j1, uL_minus_j1, bounds, eps));
}

double euler_positivity(std::span<const SubCellSide<3>> sides, const EulerModel& model) {
  for (const auto& s : sides) {
    if (auto why = model.inadmissible_reason(s.low)) throw AdmissibilityError("first-order sub-cell state: " + *why);
  }
  double t1 = 1.0;
  for (const auto& s : sides) {
    const double floor = kRelativeFloor * s.low[0];
    t1 = std::min(t1, theta_ratio(s.high[0] - floor, s.low[0] - floor, 0.0));
  }
  double t2 = 1.0;
  for (const auto& s : sides) {
    const auto safe = mix(s.high, s.low, t1);
    const double floor = kRelativeFloor * model.pressure(s.low);
    t2 = std::min(t2, concave_theta(safe, s.low, [&](const State<3>& u) { return model.pressure(u); }, floor));
  }
  return t1 * t2;
}

double five_eq_bounds(std::span<const SubCellSide<5>> sides, const FiveEqModel& model) {
  for (const auto& s : sides) {
    if (auto why = model.inadmissible_reason(s.low)) throw AdmissibilityError("first-order sub-cell state: " + *why);
  }
  double t1 = 1.0;
  for (const auto& s : sides) {
    for (int k = 0; k < 2; ++k) {
      const double floor = kRelativeFloor * s.low[k];
      t1 = std::min(t1, theta_ratio(s.high[k] - floor, s.low[k] - floor, 0.0));
    }
    t1 = std::min(t1, theta_ratio(s.high[4], s.low[4], kEpsBP));
    t1 = std::min(t1, theta_ratio(1.0 - s.high[4], 1.0 - s.low[4], kEpsBP));
  }
  double t2 = 1.0;
  for (const auto& s : sides) {
    const auto safe = mix(s.high, s.low, t1);
    const double floor = kRelativeFloor * model.energy_margin(s.low);
    auto margin = [&](const State<5>& u) { return model.energy_margin(u); };
    t2 = std::min(t2, concave_theta(safe, s.low, margin, floor));
  }
  return t1 * t2;
}

}  // namespace ammbp::limiter
