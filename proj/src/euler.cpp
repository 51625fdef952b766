#include "ammbp/systems/euler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ammbp {

EulerModel::EulerModel(double gamma) : gamma_(gamma) {
  if (!(gamma > 1.0)) throw ConfigError("Euler gamma must exceed 1");
}

EulerModel::StateT EulerModel::from_primitive(double rho, double u, double p, double gamma) {
  return {rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u};
}

double EulerModel::pressure(const StateT& s) const {
  return (gamma_ - 1.0) * (s[2] - 0.5 * s[1] * s[1] / s[0]);
}

double EulerModel::sound_speed(const StateT& s) const {
  const double p = pressure(s);
  if (!(s[0] > 0.0) || !(p > 0.0)) {
    std::ostringstream msg;
    msg << "sound speed of inadmissible state rho=" << s[0] << " p=" << p;
    throw AdmissibilityError(msg.str());
  }
  return std::sqrt(gamma_ * p / s[0]);
}

EulerModel::StateT EulerModel::flux(const StateT& s) const {
  const double u = velocity(s);
  const double p = pressure(s);
  return {s[1], s[1] * u + p, (s[2] + p) * u};
}

double EulerModel::nominal_alpha(std::span<const StateT> cells) const {
  double a = 0.0;
  for (const auto& s : cells) a = std::max(a, std::abs(velocity(s)) + sound_speed(s));
  return a;
}

double EulerModel::stage_alpha(std::span<const StateT> cells, std::span<const double> omega) const {
  double a = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double u = velocity(cells[j]);
    const double c = sound_speed(cells[j]);
    a = std::max({a, std::abs(u - omega[j]) + c, std::abs(u - omega[j + 1]) + c});
  }
  return a;
}

EulerModel::StateT EulerModel::psi(double omega, const StateT& s, double alpha, int sign) const {
  const auto f = flux(s);
  StateT r;
  for (std::size_t k = 0; k < 3; ++k) r[k] = s[k] - sign * (f[k] - omega * s[k]) / alpha;
  return r;
}

void EulerModel::basis(const StateT& s, std::vector<double>& left, std::vector<double>& right) const {
  const double u = velocity(s);
  const double c = sound_speed(s);
  const double h = (s[2] + pressure(s)) / s[0];
  right = {1.0,       1.0,         1.0,        //
           u - c,     u,           u + c,      //
           h - u * c, 0.5 * u * u, h + u * c};
  const double b1 = (gamma_ - 1.0) / (c * c);
  const double b2 = 0.5 * u * u * b1;
  left = {0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), 0.5 * b1,  //
          1.0 - b2,           b1 * u,                    -b1,       //
          0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), 0.5 * b1};
}

std::optional<std::string> EulerModel::inadmissible_reason(const StateT& s) const {
  if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2])) return "non-finite state";
  if (!(s[0] > 0.0)) return "non-positive density " + std::to_string(s[0]);
  const double p = pressure(s);
  if (!(p > 0.0)) return "non-positive pressure " + std::to_string(p);
  return std::nullopt;
}

bool EulerModel::reconstruction_usable(const StateT& s) const {
  return s[0] > 0.0 && std::isfinite(s[1]) && std::isfinite(s[2]);
}

}  // namespace ammbp
