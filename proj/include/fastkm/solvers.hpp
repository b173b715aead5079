#pragma once

#include "fastkm/operators.hpp"
#include "fastkm/schedule.hpp"
#include "fastkm/trace.hpp"

namespace fastkm {

/// Plain relaxed fixed-point iteration x^{k+1} = x^k + theta (T(x^k) - x^k)
/// with constant relaxation theta in (0, 1).
IterationTrace run_km(const NonexpansiveOp& T, const Vector& x0, double theta, long n,
                      const SolveOptions& opts = {});

/// The fast iteration
///   x^{k+1} = x^k + theta_k (T(x^k) - x^k) + alpha_k (T(x^k) - T(x^{k-1}))
/// with theta_k = theta/(k+sigma) and alpha_k = 1 - alpha/(k+sigma), started
/// from the pair (x^{-1}, x^0). One operator evaluation per iteration; the
/// previous value T(x^{k-1}) is cached. A step size s != 1 routes the run
/// through the averaged operator (1-s) I + s T.
IterationTrace run_fast_km(const NonexpansiveOp& T, const Vector& x_m1, const Vector& x0,
                           const ScheduleParams& p, long n, const SolveOptions& opts = {});

/// Anchored form of the theta = 1 iteration: x^{k+1} = eps_k v + (1-eps_k)
/// T(x^k) with eps_k = (alpha-1)/(k+sigma).
struct HalpernForm {
  Vector anchor;
  double alpha = 2.0;
  double sigma = 2.0;
};

/// Anchor matching the momentum form started at (x^{-1}, x^0):
/// v = (t0/(alpha-1)) (x^0 - T(x^{-1})) + T(x^{-1}) with t0 = sigma - 1.
HalpernForm halpern_form_of(const NonexpansiveOp& T, const Vector& x_m1, const Vector& x0,
                            double alpha, double sigma);

IterationTrace run_anchored_halpern(const NonexpansiveOp& T, const HalpernForm& h, const Vector& x0,
                                    long n, const SolveOptions& opts = {});

/// Parameters of the momentum scheme for 1/L-cocoercive root finding:
/// x^{k+1} = x^k + tbar_k (x^k - x^{k-1}) - ebar_k (G(x^k) - gbar_k G(x^{k-1})).
struct TranDinhParams {
  double omega = 2.0;       // >= 1/2
  double gamma_bar = 1.0;   // in (0, 2]
  double Lconst = 1.0;      // cocoercivity constant of G
};

/// The exact reduction to the fast iteration: alpha = 2 omega + 1,
/// theta = omega, sigma = 2 omega + 2 applied to T = I - (gamma_bar/L) G.
struct TranDinhMapped {
  ScheduleParams params;
  double step = 0.0;  // gamma_bar / L
  NonexpansiveOp make_operator(std::function<Vector(const Vector&)> G, Eigen::Index dim) const;
};

TranDinhMapped trandinh_map(const TranDinhParams& tp);

/// Literal implementation of the original scheme with its published
/// coefficient sequences; used as an equivalence oracle. Snapshots every
/// iterate.
IterationTrace run_trandinh_direct(const std::function<Vector(const Vector&)>& G,
                                   const TranDinhParams& tp, const Vector& x_m1, const Vector& x0,
                                   long n);

}  // namespace fastkm
