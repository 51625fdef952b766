#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ammbp/types.hpp"

namespace ammbp {

struct StiffenedPhase {
  double gamma = 1.4;
  double pi_inf = 0.0;
};

struct Mixture {
  double gamma = 1.4;
  double pi_inf = 0.0;
  double big_gamma = 2.5;  // 1/(gamma - 1)
  double big_pi = 0.0;     // gamma pi_inf / (gamma - 1)
};

// Five-equation transport model, U = (z1 rho1, z2 rho2, rho u, E, z1), with
// non-conservative term z1_t + u z1_x = 0.
class FiveEqModel {
 public:
  static constexpr std::size_t kVars = 5;
  using StateT = State<5>;
  // Tolerance of the mixture rule on z1 before it rejects a state.
  static constexpr double kMixtureSlack = 1e-12;

  // Throws ConfigError when (g1 - g2)(pi1 - pi2) < 0.
  FiveEqModel(StiffenedPhase phase1, StiffenedPhase phase2);

  const StiffenedPhase& phase1() const { return p1_; }
  const StiffenedPhase& phase2() const { return p2_; }

  // Throws AdmissibilityError if z lies outside [-1e-12, 1 + 1e-12]; clamps otherwise.
  Mixture mixture(double z) const;
  // Same rule with z clamped to [0, 1] unconditionally (reconstructed values).
  Mixture mixture_clamped(double z) const;

  StateT from_primitive(double rho1, double rho2, double u, double p, double z1) const;

  static double density(const StateT& s) { return s[0] + s[1]; }
  static double velocity(const StateT& s) { return s[2] / (s[0] + s[1]); }
  static double internal_energy(const StateT& s) { return s[3] - 0.5 * s[2] * s[2] / (s[0] + s[1]); }
  double pressure(const StateT& s) const;
  // rho e - pi_inf, the energy constraint of the admissible set.
  double energy_margin(const StateT& s) const;
  double sound_speed(const StateT& s) const;
  // c~ = sqrt(c^2 + kappa pi_inf/rho), kappa = 1 when p < 0.
  double modified_sound_speed(const StateT& s) const;

  StateT flux(const StateT& s) const;

  // alpha = max_j(|u_j| + c~_j).
  double alpha(std::span<const StateT> cells) const;
  double nominal_alpha(std::span<const StateT> cells) const { return alpha(cells); }
  // max(alpha, max |omega|) so that the clamp hypothesis alpha >= |omega| holds
  // at every stage.
  double stage_alpha(std::span<const StateT> cells, std::span<const double> omega) const;

  bool characteristic() const { return true; }
  void basis(const StateT& s, std::vector<double>& left, std::vector<double>& right) const;

  bool is_admissible(const StateT& s) const { return !inadmissible_reason(s); }
  std::optional<std::string> inadmissible_reason(const StateT& s) const;
  bool reconstruction_usable(const StateT& s) const;

  static std::vector<std::string> quantity_names() { return {"z1rho1", "z2rho2", "z", "rhoe_minus_pinf"}; }
  std::vector<double> quantities(const StateT& s) const { return {s[0], s[1], s[4], energy_margin(s)}; }
  std::vector<std::string> component_names() const {
    return {"z1rho1", "z2rho2", "rho_u", "E", "z1", "rho", "u", "p"};
  }
  std::vector<double> output_values(const StateT& s) const {
    return {s[0], s[1], s[2], s[3], s[4], density(s), velocity(s), pressure(s)};
  }

 private:
  StiffenedPhase p1_;
  StiffenedPhase p2_;
};

double clamp_velocity(double omega, double alpha);

// U* = (U- + U+)/2 - (F(U+) - F(U-))/(2 alpha).
FiveEqModel::StateT star_state(const FiveEqModel& model, const FiveEqModel::StateT& minus,
                               const FiveEqModel::StateT& plus, double alpha);
// u* = (rho u)* / ((z1 rho1)* + (z2 rho2)*). Throws on a zero denominator.
double star_velocity(const FiveEqModel::StateT& star);

// Same combination with the global fluxes K in place of F.
FiveEqModel::StateT star_state_global(const FiveEqModel::StateT& minus, const FiveEqModel::StateT& plus,
                                      const FiveEqModel::StateT& k_minus, const FiveEqModel::StateT& k_plus,
                                      double alpha);

// (K- + K+)/2 - alpha/2 (U+ - U-) - omega U^*.
FiveEqModel::StateT five_eq_interface_flux(const FiveEqModel::StateT& k_minus, const FiveEqModel::StateT& k_plus,
                                           const FiveEqModel::StateT& minus, const FiveEqModel::StateT& plus,
                                           double alpha, double omega);

// int u z_x over the right (x_j .. x_{j+1/2}) and left half of a cell, from
// quadratics through the values at the left end, centre and right end.
double half_cell_integral_right(double uL, double uM, double uR, double zL, double zM, double zR);
double half_cell_integral_left(double uL, double uM, double uR, double zL, double zM, double zR);

// Running integrals of B(U)U_x = (0, 0, 0, 0, -u z_x). Only the fifth
// component is nonzero, so R values are stored as scalars.
struct GlobalFluxField {
  std::vector<double> r_minus;  // R^-_{i}, interfaces i = 0..N
  std::vector<double> r_plus;   // R^+_{i}
  std::vector<double> r_cell;   // R_j, cells j = 0..N-1
  std::vector<double> u_star;   // u* at each interface
  std::vector<FiveEqModel::StateT> k_minus, k_plus;  // K^{-+} at each interface
};

// Interface i separates cell i-1 and cell i. `minus[i]`, `plus[i]` are the
// traces at interface i; `left`, `mid`, `right` are per-cell point values.
// Passing cell averages for all three gives the first-order field (B_j = 0).
GlobalFluxField assemble_global_flux(const FiveEqModel& model, std::span<const FiveEqModel::StateT> minus,
                                     std::span<const FiveEqModel::StateT> plus,
                                     std::span<const FiveEqModel::StateT> left,
                                     std::span<const FiveEqModel::StateT> mid,
                                     std::span<const FiveEqModel::StateT> right, double alpha);

}  // namespace ammbp
