#pragma once

#include "ammbp/types.hpp"

namespace ammbp {

// H(omega, U) = F(U) - omega U: the flux seen by a node moving at omega.
template <class Model>
typename Model::StateT moving_flux(const Model& model, double omega, const typename Model::StateT& u) {
  auto f = model.flux(u);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] -= omega * u[k];
  return f;
}

// Lax-Friedrichs flux on a moving interface:
// (H(omega, U-) + H(omega, U+))/2 - alpha/2 (U+ - U-).
template <class Model>
typename Model::StateT lf_flux(const Model& model, double omega, const typename Model::StateT& minus,
                               const typename Model::StateT& plus, double alpha) {
  const auto hm = moving_flux(model, omega, minus);
  const auto hp = moving_flux(model, omega, plus);
  typename Model::StateT out;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (hm[k] + hp[k]) - 0.5 * alpha * (plus[k] - minus[k]);
  return out;
}

}  // namespace ammbp
