#pragma once

#include <vector>

#include "fastkm/operators.hpp"

namespace fastkm::dyn {

enum class BetaMode { constant, power };

/// The damped second-order model
///   x'' + (alpha/t) x' + beta(t) d/dt Q(x) + b(t) Q(x) = 0,  t >= t0 > 0,
/// with b(t) = (1-eta) beta'(t) + theta beta(t)/t and
/// theta = (1-eta) + eta (alpha-1). Q is linear and monotone, so
/// d/dt Q(x(t)) = Q x'(t) exactly. The power family beta(t) = beta0
/// t^{alpha-2-epsilon} satisfies the growth condition
/// 0 <= beta'(t) t / beta(t) <= alpha - 2 - epsilon by construction for
/// epsilon in [0, alpha-2]; epsilon = 0 saturates it.
struct DynamicsSpec {
  LinearMap Q;
  double alpha = 3.0;
  double eta = 0.5;  // [0, 1]; the edge values realize theta = 1 and alpha-1
  BetaMode beta_mode = BetaMode::constant;
  double beta0 = 1.0;
  double epsilon = 0.0;  // power family exponent defect
  double t0 = 1.0;
  Vector x0;
  Vector v0;

  double beta(double t) const;
  double beta_dot(double t) const;
  double theta() const { return (1.0 - eta) + eta * (alpha - 1.0); }
  double b(double t) const { return (1.0 - eta) * beta_dot(t) + theta() * beta(t) / t; }
  void validate() const;
};

struct Derivs {
  Vector dx;
  Vector dv;
};

/// First-order reduction: dx = v, dv = -(alpha/t) v - beta(t) Q v - b(t) Q x.
Derivs ode_rhs(const DynamicsSpec& spec, double t, const Vector& x, const Vector& v);

struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> v;  // empty for first-order flows
  std::vector<double> qnorm;
};

/// Classical fixed-step RK4 on the reduction; samples every `stride` steps
/// plus the final state. Deterministic.
Trajectory integrate_rk4(const DynamicsSpec& spec, double t_end, double h, int stride = 1);

enum class EdgeMode { theta_one, theta_alpha_minus_one };

/// Closed-form solutions of the two boundary regimes for alpha = 3, beta = 1
/// and Q the counter-clockwise rotation (complex multiplication by i, with
/// a + bi read as the vector (a, b)):
///   theta = 1:        x(t) = c1 (1 - i t)/t^2 + c2 e^{-it}/t^2,
///   theta = alpha-1:  x(t) = c1/t^2 + c2 (1 + i t) e^{-it}/t^2.
Vector rotation_closed_form(EdgeMode mode, double c1, double c2, double t);
Vector rotation_closed_form_velocity(EdgeMode mode, double c1, double c2, double t);

/// Anchored first-order flow x' + beta0 t^{alpha-2} Q x + ((alpha-1)/t)
/// (x - anchor) = 0, the regime the second-order system collapses to when
/// beta saturates the growth condition.
Trajectory integrate_tikhonov_flow(const LinearMap& Q, double alpha, double beta0, double t0,
                                   const Vector& anchor, const Vector& x0, double t_end, double h,
                                   int stride = 1);

/// (x1, x2) -> (-x2, x1), multiplication by i.
LinearMap rotation_map();
LinearMap zero_map(Eigen::Index d);

}  // namespace fastkm::dyn
