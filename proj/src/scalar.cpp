#include "ammbp/systems/scalar.hpp"

#include <algorithm>
#include <cmath>

namespace ammbp {

double ScalarModel::nominal_alpha(std::span<const StateT> cells) const {
  double a = 0.0;
  for (const auto& u : cells) a = std::max(a, std::abs(df(u[0])));
  return a;
}

double ScalarModel::stage_alpha(std::span<const StateT> cells, std::span<const double> omega) const {
  double a = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double s = df(cells[j][0]);
    a = std::max({a, std::abs(s - omega[j]), std::abs(s - omega[j + 1])});
  }
  return a;
}

std::optional<std::string> ScalarModel::inadmissible_reason(const StateT& u) const {
  if (!std::isfinite(u[0])) return "non-finite value";
  return std::nullopt;
}

}  // namespace ammbp
