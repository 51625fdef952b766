#include "ammbp/systems/five_eq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ammbp/linalg.hpp"

namespace ammbp {
namespace {

Mixture mix(const StiffenedPhase& p1, const StiffenedPhase& p2, double z) {
  const double g1 = 1.0 / (p1.gamma - 1.0);
  const double g2 = 1.0 / (p2.gamma - 1.0);
  Mixture m;
  m.big_gamma = z * g1 + (1.0 - z) * g2;
  m.big_pi = z * p1.gamma * p1.pi_inf * g1 + (1.0 - z) * p2.gamma * p2.pi_inf * g2;
  m.gamma = 1.0 + 1.0 / m.big_gamma;
  m.pi_inf = m.big_pi / (m.gamma * m.big_gamma);
  return m;
}

}  // namespace

FiveEqModel::FiveEqModel(StiffenedPhase phase1, StiffenedPhase phase2) : p1_(phase1), p2_(phase2) {
  if (!(p1_.gamma > 1.0) || !(p2_.gamma > 1.0)) throw ConfigError("phase gammas must exceed 1");
  if (p1_.pi_inf < 0.0 || p2_.pi_inf < 0.0) throw ConfigError("phase pi_inf must be non-negative");
  if ((p1_.gamma - p2_.gamma) * (p1_.pi_inf - p2_.pi_inf) < 0.0) {
    throw ConfigError("(gamma1 - gamma2)(pi1 - pi2) < 0: admissible set is not convex");
  }
}

Mixture FiveEqModel::mixture(double z) const {
  if (!(z >= -kMixtureSlack && z <= 1.0 + kMixtureSlack)) {
    std::ostringstream msg;
    msg << "volume fraction " << z << " outside [0,1]";
    throw AdmissibilityError(msg.str());
  }
  return mix(p1_, p2_, std::clamp(z, 0.0, 1.0));
}

Mixture FiveEqModel::mixture_clamped(double z) const {
  if (std::isnan(z)) throw AdmissibilityError("volume fraction is NaN");
  return mix(p1_, p2_, std::clamp(z, 0.0, 1.0));
}

FiveEqModel::StateT FiveEqModel::from_primitive(double rho1, double rho2, double u, double p, double z1) const {
  const Mixture m = mixture(z1);
  const double a1 = z1 * rho1;
  const double a2 = (1.0 - z1) * rho2;
  const double rho = a1 + a2;
  return {a1, a2, rho * u, m.big_gamma * p + m.big_pi + 0.5 * rho * u * u, z1};
}

double FiveEqModel::pressure(const StateT& s) const {
  const Mixture m = mixture_clamped(s[4]);
  return (internal_energy(s) - m.big_pi) / m.big_gamma;
}

double FiveEqModel::energy_margin(const StateT& s) const {
  return internal_energy(s) - mixture_clamped(s[4]).pi_inf;
}

double FiveEqModel::sound_speed(const StateT& s) const {
  const Mixture m = mixture_clamped(s[4]);
  const double rho = density(s);
  const double c2 = m.gamma * (pressure(s) + m.pi_inf) / rho;
  if (!(rho > 0.0) || !(c2 > 0.0)) throw AdmissibilityError("sound speed undefined for state");
  return std::sqrt(c2);
}

double FiveEqModel::modified_sound_speed(const StateT& s) const {
  const Mixture m = mixture_clamped(s[4]);
  const double rho = density(s);
  if (!(rho > 0.0)) throw AdmissibilityError("non-positive mixture density");
  const double p = pressure(s);
  double c2 = m.gamma * (p + m.pi_inf) / rho;
  if (p < 0.0) c2 += m.pi_inf / rho;
  if (!(c2 > 0.0)) {
    std::ostringstream msg;
    msg << "modified sound speed squared " << c2 << " <= 0";
    throw AdmissibilityError(msg.str());
  }
  return std::sqrt(c2);
}

FiveEqModel::StateT FiveEqModel::flux(const StateT& s) const {
  const double u = velocity(s);
  const double p = pressure(s);
  return {s[0] * u, s[1] * u, s[2] * u + p, (s[3] + p) * u, 0.0};
}

double FiveEqModel::alpha(std::span<const StateT> cells) const {
  double a = 0.0;
  for (const auto& s : cells) a = std::max(a, std::abs(velocity(s)) + modified_sound_speed(s));
  return a;
}

double FiveEqModel::stage_alpha(std::span<const StateT> cells, std::span<const double> omega) const {
  double a = alpha(cells);
  for (double w : omega) a = std::max(a, std::abs(w));
  return a;
}

void FiveEqModel::basis(const StateT& s, std::vector<double>& left, std::vector<double>& right) const {
  const Mixture m = mixture_clamped(s[4]);
  const double rho = density(s);
  const double u = velocity(s);
  const double p = pressure(s);
  const double c = sound_speed(s);
  const double rc2 = rho * c * c;
  const double a1 = s[0], a2 = s[1];

  // Eigenvectors in (a1, a2, u, p, z): u - c, u, u, u + c, u.
  const std::vector<double> rp = {a1,   1.0, 0.0, a1,  0.0,  //
                                  a2,   0.0, 1.0, a2,  0.0,  //
                                  -c,   0.0, 0.0, c,   0.0,  //
                                  rc2,  0.0, 0.0, rc2, 0.0,  //
                                  0.0,  0.0, 0.0, 0.0, 1.0};
  const double dgamma = 1.0 / (p1_.gamma - 1.0) - 1.0 / (p2_.gamma - 1.0);
  const double dpi = p1_.gamma * p1_.pi_inf / (p1_.gamma - 1.0) - p2_.gamma * p2_.pi_inf / (p2_.gamma - 1.0);
  // dU/dW
  const std::vector<double> jac = {1.0,         0.0,         0.0,    0.0,         0.0,  //
                                   0.0,         1.0,         0.0,    0.0,         0.0,  //
                                   u,           u,           rho,    0.0,         0.0,  //
                                   0.5 * u * u, 0.5 * u * u, rho * u, m.big_gamma, p * dgamma + dpi,  //
                                   0.0,         0.0,         0.0,    0.0,         1.0};
  right = linalg::multiply(jac, rp, 5);

  const double h = 1.0 / (2.0 * c), q = 1.0 / rc2;
  const std::vector<double> lp = {0.0, 0.0, -h,  0.5 * q, 0.0,  //
                                  1.0, 0.0, 0.0, -a1 * q, 0.0,  //
                                  0.0, 1.0, 0.0, -a2 * q, 0.0,  //
                                  0.0, 0.0, h,   0.5 * q, 0.0,  //
                                  0.0, 0.0, 0.0, 0.0,     1.0};
  const double ig = 1.0 / m.big_gamma;
  // dW/dU
  const std::vector<double> inv = {1.0,              0.0,              0.0,      0.0, 0.0,  //
                                   0.0,              1.0,              0.0,      0.0, 0.0,  //
                                   -u / rho,         -u / rho,         1.0 / rho, 0.0, 0.0,  //
                                   0.5 * u * u * ig, 0.5 * u * u * ig, -u * ig,  ig,  -(p * dgamma + dpi) * ig,  //
                                   0.0,              0.0,              0.0,      0.0, 1.0};
  left = linalg::multiply(lp, inv, 5);
}

std::optional<std::string> FiveEqModel::inadmissible_reason(const StateT& s) const {
  for (double v : s) {
    if (!std::isfinite(v)) return "non-finite state";
  }
  if (!(s[4] >= 0.0 && s[4] <= 1.0)) return "volume fraction " + std::to_string(s[4]) + " outside [0,1]";
  if (!(s[0] >= 0.0) || !(s[1] >= 0.0)) return "negative partial density";
  if (!(density(s) > 0.0)) return "non-positive density";
  const double e = energy_margin(s);
  if (!(e > 0.0)) {
    std::ostringstream msg;
    msg << "rho e - pi_inf = " << e << " <= 0";
    return msg.str();
  }
  return std::nullopt;
}

bool FiveEqModel::reconstruction_usable(const StateT& s) const {
  for (double v : s) {
    if (!std::isfinite(v)) return false;
  }
  return density(s) > 0.0;
}

double clamp_velocity(double omega, double alpha) {
  if (std::abs(omega) <= alpha) return omega;
  return omega > 0.0 ? alpha : -alpha;
}

FiveEqModel::StateT star_state(const FiveEqModel& model, const FiveEqModel::StateT& minus,
                               const FiveEqModel::StateT& plus, double alpha) {
  const auto fm = model.flux(minus);
  const auto fp = model.flux(plus);
  FiveEqModel::StateT r;
  for (std::size_t k = 0; k < 5; ++k) r[k] = 0.5 * (minus[k] + plus[k]) - (fp[k] - fm[k]) / (2.0 * alpha);
  return r;
}

double star_velocity(const FiveEqModel::StateT& star) {
  const double rho = star[0] + star[1];
  if (rho == 0.0 || !std::isfinite(rho)) throw AdmissibilityError("star state has zero density");
  return star[2] / rho;
}

FiveEqModel::StateT star_state_global(const FiveEqModel::StateT& minus, const FiveEqModel::StateT& plus,
                                      const FiveEqModel::StateT& k_minus, const FiveEqModel::StateT& k_plus,
                                      double alpha) {
  FiveEqModel::StateT r;
  for (std::size_t k = 0; k < 5; ++k) r[k] = 0.5 * (minus[k] + plus[k]) - (k_plus[k] - k_minus[k]) / (2.0 * alpha);
  return r;
}

FiveEqModel::StateT five_eq_interface_flux(const FiveEqModel::StateT& k_minus, const FiveEqModel::StateT& k_plus,
                                           const FiveEqModel::StateT& minus, const FiveEqModel::StateT& plus,
                                           double alpha, double omega) {
  const auto star = star_state_global(minus, plus, k_minus, k_plus, alpha);
  FiveEqModel::StateT h;
  for (std::size_t k = 0; k < 5; ++k) {
    h[k] = 0.5 * (k_minus[k] + k_plus[k]) - 0.5 * alpha * (plus[k] - minus[k]) - omega * star[k];
  }
  return h;
}

// u = a0 + a1 t + a2 t^2 and z_t = b1 + 2 b2 t on t in [-1, 1].
double half_cell_integral_right(double uL, double uM, double uR, double zL, double zM, double zR) {
  const double a0 = uM, a1 = 0.5 * (uR - uL), a2 = 0.5 * (uR + uL) - uM;
  const double b1 = 0.5 * (zR - zL), b2 = 0.5 * (zR + zL) - zM;
  return a0 * b1 + (a1 * b1 + 2.0 * a0 * b2) / 2.0 + (a2 * b1 + 2.0 * a1 * b2) / 3.0 + a2 * b2 / 2.0;
}

double half_cell_integral_left(double uL, double uM, double uR, double zL, double zM, double zR) {
  const double a0 = uM, a1 = 0.5 * (uR - uL), a2 = 0.5 * (uR + uL) - uM;
  const double b1 = 0.5 * (zR - zL), b2 = 0.5 * (zR + zL) - zM;
  return a0 * b1 - (a1 * b1 + 2.0 * a0 * b2) / 2.0 + (a2 * b1 + 2.0 * a1 * b2) / 3.0 - a2 * b2 / 2.0;
}

GlobalFluxField assemble_global_flux(const FiveEqModel& model, std::span<const FiveEqModel::StateT> minus,
                                     std::span<const FiveEqModel::StateT> plus,
                                     std::span<const FiveEqModel::StateT> left,
                                     std::span<const FiveEqModel::StateT> mid,
                                     std::span<const FiveEqModel::StateT> right, double alpha) {
  const std::size_t n = mid.size();
  if (minus.size() != n + 1 || plus.size() != n + 1 || left.size() != n || right.size() != n) {
    throw std::invalid_argument("global flux input size mismatch");
  }
  GlobalFluxField g;
  g.r_minus.assign(n + 1, 0.0);
  g.r_plus.assign(n + 1, 0.0);
  g.r_cell.assign(n, 0.0);
  g.u_star.assign(n + 1, 0.0);
  g.k_minus.resize(n + 1);
  g.k_plus.resize(n + 1);

  auto jump = [&](std::size_t i) {
    g.u_star[i] = star_velocity(star_state(model, minus[i], plus[i], alpha));
    // B_Psi,5 = -u* (z+ - z-)
    return -g.u_star[i] * (plus[i][4] - minus[i][4]);
  };

  g.r_minus[0] = 0.0;
  g.r_plus[0] = jump(0);
  for (std::size_t j = 0; j < n; ++j) {
    const double uL = FiveEqModel::velocity(left[j]), uM = FiveEqModel::velocity(mid[j]);
    const double uR = FiveEqModel::velocity(right[j]);
    const double zL = left[j][4], zM = mid[j][4], zR = right[j][4];
    g.r_cell[j] = g.r_plus[j] - half_cell_integral_left(uL, uM, uR, zL, zM, zR);
    g.r_minus[j + 1] = g.r_cell[j] - half_cell_integral_right(uL, uM, uR, zL, zM, zR);
    g.r_plus[j + 1] = g.r_minus[j + 1] + jump(j + 1);
  }
  for (std::size_t i = 0; i <= n; ++i) {
    g.k_minus[i] = model.flux(minus[i]);
    g.k_minus[i][4] -= g.r_minus[i];
    g.k_plus[i] = model.flux(plus[i]);
    g.k_plus[i][4] -= g.r_plus[i];
  }
  return g;
}

}  // namespace ammbp
