#pragma once

#include <functional>
#include <vector>

#include "fastkm/operators.hpp"

namespace fastkm {

inline double residual(const Vector& x, const Vector& Tx) {
  if (x.size() != Tx.size()) throw std::invalid_argument("residual: size mismatch");
  return (x - Tx).norm();
}

/// <x - T(x), T(x) - z*> + 1/2 ||x - T(x)||^2; nonnegative for nonexpansive T
/// and any fixed point z*. Bounds the primal-dual gap in saddle-point
/// instantiations.
double gap_function(const Vector& x, const Vector& Tx, const Vector& z_star);

/// L(x, y*) - L(x*, y) with L(x, y) = f(x) + <Lx, y> - g*(y), for a saddle
/// point (x*, y*) and value evaluators of f and g*.
double primal_dual_gap(const std::function<double(const Vector&)>& f_value,
                       const std::function<double(const Vector&)>& gstar_value, const LinearMap& L,
                       const Vector& x, const Vector& y, const Vector& x_star,
                       const Vector& y_star);

using InnerProduct = std::function<double(const Vector&, const Vector&)>;

/// Discrete Lyapunov data with z^{k} := T(x^{k-1}), Q^k := x^{k-1} - z^k:
///   E_k = delta_k <Q^k, z^k - z*> + (delta_k + xi_k)/2 ||Q^k||^2
///         + c/2 ||z^{k-1} - z*||^2 + 1/2 ||v^k||^2,
///   v^k = lambda (z^{k-1} - z*) + t_{k-1} (z^k - z^{k-1} + (1-eta) Q^k),
/// with t_k = k - 1 + sigma, delta_k = eta lambda t_{k-1},
/// xi_k = (1-eta) eta t_{k-1}^2, c = lambda (alpha - 1 - lambda).
struct LyapunovState {
  double lambda = 1.0;  // in [0, alpha-1]
  double eta = 0.5;     // in (0, 1)
  double alpha = 2.0;
  double sigma = 2.0;
  Vector z_star;

  double t(long k) const { return static_cast<double>(k) - 1.0 + sigma; }
  double delta(long k) const { return eta * lambda * t(k - 1); }
  double xi(long k) const { return (1.0 - eta) * eta * t(k - 1) * t(k - 1); }
  double c() const { return lambda * (alpha - 1.0 - lambda); }
};

/// E_k from the rolling window (z^{k-1}, z^k, x^{k-1}), k >= 1. A custom
/// inner product swaps every norm to the M-seminorm version for
/// preconditioned systems.
double lyapunov_energy(const LyapunovState& st, long k, const Vector& z_km1, const Vector& z_k,
                       const Vector& x_km1, const InnerProduct& inner = {});

struct ExplicitBounds {
  double residual_sq;  // 2 E1 / (eta (1-eta) t_{k-1}^2) >= ||x^{k-1} - T(x^{k-1})||^2
  double gap;          // E1 / (eta (alpha-1) t_{k-1})  >= gap at x^{k-1}
};

/// Non-asymptotic bounds valid at every k of a sigma >= alpha - 1 run, from
/// the initial energy E1 at lambda = alpha - 1. Degenerates at eta in {0, 1}.
ExplicitBounds explicit_residual_bound(double E1, double eta, double alpha, double t_km1);

/// Least-squares slope of log(value) against log(k) over k in [k_lo, k_hi];
/// the empirical proxy for power-law rates. Requires >= 10 window points and
/// positive values.
double rate_slope(const std::vector<double>& ks, const std::vector<double>& values, double k_lo,
                  double k_hi);

}  // namespace fastkm
