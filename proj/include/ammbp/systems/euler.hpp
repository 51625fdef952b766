#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ammbp/types.hpp"

namespace ammbp {

// Ideal-gas Euler equations, U = (rho, rho u, E).
class EulerModel {
 public:
  static constexpr std::size_t kVars = 3;
  using StateT = State<3>;

  explicit EulerModel(double gamma = 1.4);

  double gamma() const { return gamma_; }

  static StateT from_primitive(double rho, double u, double p, double gamma);
  StateT from_primitive(double rho, double u, double p) const { return from_primitive(rho, u, p, gamma_); }

  double velocity(const StateT& s) const { return s[1] / s[0]; }
  double pressure(const StateT& s) const;
  // Throws AdmissibilityError for rho <= 0 or p <= 0.
  double sound_speed(const StateT& s) const;

  StateT flux(const StateT& s) const;

  double nominal_alpha(std::span<const StateT> cells) const;
  // max_j max(|u_j - omega_{j-1/2}|, |u_j - omega_{j+1/2}|) + c_j
  double stage_alpha(std::span<const StateT> cells, std::span<const double> omega) const;

  // Psi_1 (sign = +1) or Psi_2 (sign = -1): U -+ (F(U) - omega U)/alpha.
  StateT psi(double omega, const StateT& s, double alpha, int sign) const;

  bool characteristic() const { return true; }
  // Row-major left and right eigenvectors of dF/dU at `s`.
  void basis(const StateT& s, std::vector<double>& left, std::vector<double>& right) const;

  bool is_admissible(const StateT& s) const { return !inadmissible_reason(s); }
  std::optional<std::string> inadmissible_reason(const StateT& s) const;
  bool reconstruction_usable(const StateT& s) const;

  static std::vector<std::string> quantity_names() { return {"rho", "p"}; }
  std::vector<double> quantities(const StateT& s) const { return {s[0], pressure(s)}; }
  std::vector<std::string> component_names() const { return {"rho", "rho_u", "E", "u", "p"}; }
  std::vector<double> output_values(const StateT& s) const { return {s[0], s[1], s[2], velocity(s), pressure(s)}; }

 private:
  double gamma_;
};

}  // namespace ammbp
