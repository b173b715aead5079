#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fastkm {

enum class CoolingMode { none, linear, log };

/// theta = (1 - eta) + eta (alpha - 1), the convex combination of the two
/// admissible extremes parameterized by eta in [0, 1].
double theta_from_eta(double eta, double alpha);

/// Nondecreasing schedule from alpha0 to alpha_max, saturating at
/// k = floor(maxit / 2) and constant afterwards. `linear` ramps with a fixed
/// step, `log` ramps on a logarithmic scale.
double cooling_alpha(long k, double alpha0, double alpha_max, long maxit, CoolingMode mode);

/// Parameter bundle for the fast iteration: damping alpha >= 2, shift
/// sigma > 0, relaxation level theta (or eta, from which theta is derived),
/// step size s in (0, 2] applied through operator averaging, and an optional
/// cooling schedule that grows alpha along the iterations.
struct ScheduleParams {
  double alpha = 2.0;
  double sigma = 2.0;
  double theta = 1.0;
  std::optional<double> eta;  // when set, theta := (1-eta) + eta(alpha-1)
  double s = 1.0;
  CoolingMode cooling = CoolingMode::none;
  double alpha_max = 0.0;  // cooling target, reached at floor(maxit/2)
  long maxit = 0;          // cooling horizon

  /// Derives theta from eta (when given), validates ranges, throws
  /// std::invalid_argument on hard violations. Boundary choices (theta <= 1,
  /// theta = alpha-1) are accepted and reported by warnings().
  void resolve();

  std::vector<std::string> warnings() const;

  /// eta when given, otherwise recovered from theta; 1/2 at alpha == 2
  /// where every eta yields theta = 1.
  double eta_effective() const;

  double alpha_at(long k) const;
  /// Under cooling theta tracks the growing alpha through the fixed eta;
  /// without cooling it is the constant resolved value.
  double theta_at(long k) const;
};

struct StepCoeffs {
  double theta_k;  // theta / (k + sigma)
  double alpha_k;  // 1 - alpha / (k + sigma), used as-is (may be negative)
  double t_k;      // k - 1 + sigma
};

StepCoeffs schedule_coeffs(long k, const ScheduleParams& p);

/// Weights of one update step on (x^k, x^k - x^{k-1}, T(x^k), T(x^k) -
/// T(x^{k-1})) once the step size s is folded back onto the unaveraged
/// operator T.
struct EffectiveWeights {
  double on_x;
  double on_dx;
  double on_Tx;
  double on_dTx;
};

EffectiveWeights effective_weights(long k, const ScheduleParams& p);

}  // namespace fastkm
