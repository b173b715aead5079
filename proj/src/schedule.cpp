#include "fastkm/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastkm {

double theta_from_eta(double eta, double alpha) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("theta_from_eta: eta must be in [0, 1]");
  if (!(alpha >= 2.0)) throw std::invalid_argument("theta_from_eta: alpha must be >= 2");
  return (1.0 - eta) + eta * (alpha - 1.0);
}

double cooling_alpha(long k, double alpha0, double alpha_max, long maxit, CoolingMode mode) {
  if (!(alpha_max >= alpha0)) throw std::invalid_argument("cooling_alpha: alpha_max must be >= alpha0");
  if (maxit < 2) throw std::invalid_argument("cooling_alpha: maxit must be >= 2");
  const long half = maxit / 2;
  if (k <= 0) return alpha0;
  double frac;
  switch (mode) {
    case CoolingMode::linear:
      frac = std::min(1.0, static_cast<double>(k) / static_cast<double>(half));
      break;
    case CoolingMode::log:
      frac = std::min(1.0, std::log1p(static_cast<double>(k)) / std::log1p(static_cast<double>(half)));
      break;
    default:
      return alpha0;
  }
  return alpha0 + (alpha_max - alpha0) * frac;
}

void ScheduleParams::resolve() {
  if (!(alpha >= 2.0)) throw std::invalid_argument("ScheduleParams: alpha must be >= 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("ScheduleParams: sigma must be > 0");
  if (!(s > 0.0 && s <= 2.0)) throw std::invalid_argument("ScheduleParams: s must be in (0, 2]");
  if (eta) theta = theta_from_eta(*eta, alpha);
  if (!(theta > 0.0)) throw std::invalid_argument("ScheduleParams: theta must be > 0");
  if (theta > alpha - 1.0 + 1e-12)
    throw std::invalid_argument("ScheduleParams: theta must be <= alpha - 1");
  if (cooling != CoolingMode::none) {
    if (!(alpha_max >= alpha)) throw std::invalid_argument("ScheduleParams: alpha_max must be >= alpha");
    if (maxit < 2) throw std::invalid_argument("ScheduleParams: cooling requires maxit >= 2");
  }
}

std::vector<std::string> ScheduleParams::warnings() const {
  std::vector<std::string> w;
  double th = eta ? theta_from_eta(*eta, alpha) : theta;
  if (th < 1.0) w.push_back("theta < 1 is outside the stated interval [1, alpha-1]; no rate guarantee");
  if (th == 1.0 && alpha > 2.0) w.push_back("theta = 1 boundary: anchored regime, little-o rates not guaranteed");
  if (th == alpha - 1.0 && alpha > 2.0)
    w.push_back("theta = alpha - 1 boundary: convergence is an open problem, reporting empirics only");
  return w;
}

double ScheduleParams::eta_effective() const {
  if (eta) return *eta;
  if (alpha > 2.0) return (theta - 1.0) / (alpha - 2.0);
  return 0.5;
}

double ScheduleParams::alpha_at(long k) const {
  if (cooling == CoolingMode::none) return alpha;
  return cooling_alpha(k, alpha, alpha_max, maxit, cooling);
}

double ScheduleParams::theta_at(long k) const {
  if (cooling == CoolingMode::none) return theta;
  return theta_from_eta(eta_effective(), alpha_at(k));
}

StepCoeffs schedule_coeffs(long k, const ScheduleParams& p) {
  StepCoeffs c;
  const double denom = static_cast<double>(k) + p.sigma;
  c.theta_k = p.theta_at(k) / denom;
  c.alpha_k = 1.0 - p.alpha_at(k) / denom;
  c.t_k = static_cast<double>(k) - 1.0 + p.sigma;
  return c;
}

EffectiveWeights effective_weights(long k, const ScheduleParams& p) {
  const StepCoeffs c = schedule_coeffs(k, p);
  EffectiveWeights w;
  w.on_Tx = p.s * c.theta_k;
  w.on_dTx = p.s * c.alpha_k;
  w.on_x = 1.0 - p.s * c.theta_k;
  w.on_dx = (1.0 - p.s) * c.alpha_k;
  return w;
}

}  // namespace fastkm
