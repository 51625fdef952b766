#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ammbp/types.hpp"

namespace ammbp {

// u_t + f(u)_x = 0 with either f = a u (linear advection) or f = u^2/2.
class ScalarModel {
 public:
  static constexpr std::size_t kVars = 1;
  using StateT = State<1>;

  enum class Kind { Advection, Burgers };

  static ScalarModel advection(double speed) { return ScalarModel(Kind::Advection, speed); }
  static ScalarModel burgers() { return ScalarModel(Kind::Burgers, 0.0); }

  Kind kind() const { return kind_; }
  double speed() const { return speed_; }

  double f(double u) const { return kind_ == Kind::Advection ? speed_ * u : 0.5 * u * u; }
  double df(double u) const { return kind_ == Kind::Advection ? speed_ : u; }
  StateT flux(const StateT& u) const { return {f(u[0])}; }

  // max |f'(u)| over the cells, i.e. the mesh-relative speed at rest.
  double nominal_alpha(std::span<const StateT> cells) const;
  // max_j max(|f'(u_j) - omega_{j-1/2}|, |f'(u_j) - omega_{j+1/2}|).
  double stage_alpha(std::span<const StateT> cells, std::span<const double> omega) const;

  bool characteristic() const { return false; }
  std::optional<std::string> inadmissible_reason(const StateT& u) const;
  bool reconstruction_usable(const StateT&) const { return true; }

  static std::vector<std::string> quantity_names() { return {"u"}; }
  std::vector<double> quantities(const StateT& u) const { return {u[0]}; }
  std::vector<std::string> component_names() const { return {"u"}; }
  std::vector<double> output_values(const StateT& u) const { return {u[0]}; }
  bool is_admissible(const StateT& u) const { return !inadmissible_reason(u); }

 private:
  ScalarModel(Kind kind, double speed) : kind_(kind), speed_(speed) {}
  Kind kind_;
  double speed_;
};

}  // namespace ammbp
