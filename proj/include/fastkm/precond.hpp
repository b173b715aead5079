#pragma once

#include <functional>
#include <optional>

#include "fastkm/operators.hpp"
#include "fastkm/schedule.hpp"
#include "fastkm/trace.hpp"

namespace fastkm {

/// Parameterized prox: (v, tau) -> prox_{tau f}(v), equivalently J_{tau A}(v).
using ProxFn = std::function<Vector(const Vector&, double)>;

/// Fixed-step resolvent J_A.
using ResolventFn = std::function<Vector(const Vector&)>;

struct ResolventResult {
  Vector next;
  BlockVector shadows;
};

/// A preconditioned splitting system in reduced coordinates: the resolvent
/// oracle maps the reduced iterate w to its successor and exposes the shadow
/// points computed en route. The bilinear form m_form realizes the (semi-)
/// inner product the convergence theory runs in; in reduced coordinates it is
/// the plain dot product for DRS-type systems and the preconditioner form for
/// PDHG, where the reduced variable is the full pair (x, y).
struct ResolventSystem {
  Eigen::Index reduced_dim = 0;
  std::function<ResolventResult(const Vector&)> resolvent;
  std::function<double(const Vector&, const Vector&)> m_form;  // <a, M b>
  std::optional<double> lambda1;  // smallest nonzero eigenvalue of Z Z^T (graph systems)
  std::optional<BlockVector> known_solution;
  std::optional<bool> step_condition_ok;  // PDHG: tau1 tau2 ||L||^2 < 1

  /// ||a - b||_M^2 in reduced coordinates.
  double seminorm_sq(const Vector& a, const Vector& b) const {
    Vector d = a - b;
    return m_form(d, d);
  }
};

/// Moreau identity: from a parameterized prox of g, the prox of the
/// conjugate, prox_{tau g*}(y) = y - tau prox_{g/tau}(y/tau).
ProxFn moreau_prox_conjugate(ProxFn prox_g);

struct PdhgProblem {
  ProxFn prox_f;
  ProxFn prox_gstar;
  LinearMap L;
  double tau1 = 1.0;
  double tau2 = 1.0;
};

/// One primal-dual sweep as the resolvent of the preconditioned inclusion:
///   x+ = prox_{tau1 f}(x - tau1 L^T y),  y+ = prox_{tau2 g*}(y + tau2 L (2x+ - x)),
/// shadows (x+, y+); the form is ||dx||^2/tau1 - 2 <L dx, dy> + ||dy||^2/tau2.
/// The step condition tau1 tau2 ||L||^2 < 1 is estimated and recorded,
/// violations only flag the system.
ResolventSystem build_pdhg(const PdhgProblem& prob);

/// Douglas-Rachford on the reduced variable w:
///   x1 = J_{A1}(w), x2 = J_{A2}(2 x1 - w), w+ = w + x2 - x1,
/// shadows (x1, x2); plain norm on w.
ResolventSystem build_drs(ResolventFn JA1, ResolventFn JA2, Eigen::Index dim);

/// Incidence-style matrix of the path graph on N nodes: Z_{j,j} = 1,
/// Z_{j+1,j} = -1. Satisfies ker Z^T = span{1} with rank N-1.
Matrix path_graph_Z(int N);

struct GraphDrsSpec {
  std::vector<ProxFn> proxes;  // J_{t A_i} as (v, t) -> prox
  Matrix Z;                    // N x (N-1), ker Z^T = span{1}
  Matrix Zhat;                 // N x (N-1), Zhat^T 1 = 0 (may be zero)
  double tau = 1.0;
  Eigen::Index block_dim = 0;  // dimension of each H block
};

/// Graph splitting on w in H^{N-1} (flattened block-wise): forward
/// substitution over i = 1..N through the block lower-triangular structure,
///   x_i = J_{(tau/d_i) A_i}( -(2/d_i) sum_{h<i} (L+Lhat)_{hi} x_h
///                            + (1/d_i) sum_j Z_{ij} w_j ),
///   w_j+ = w_j - sum_i Z_{ij} x_i,
/// with L = Z Z^T, Lhat = Zhat Zhat^T, d = diag(L + Lhat). The matrices are
/// certified at construction (kernel, rank, positive diagonal) and lambda1
/// is computed by a dense symmetric eigendecomposition.
ResolventSystem build_graph_drs(const GraphDrsSpec& spec);

/// Mean squared deviation of the blocks from their mean.
double variance(const BlockVector& points);

struct PppOptions {
  int snapshot_stride = 0;
  std::optional<double> stop_residual;
  std::function<void(long k, const Vector& w, const Vector& Jw, const BlockVector& shadows,
                     double residual)>
      on_step;
};

/// The fast iteration on the reduced variable with T = I + s (J - I):
/// identical arithmetic to run_fast_km on that operator, with per-step
/// reduced residual ||w - J(w)||_M, shadow tracking, and (for graph systems)
/// the dispersion of the shadow blocks.
IterationTrace run_fast_ppp(const ResolventSystem& sys, const ScheduleParams& p, const Vector& w_m1,
                            const Vector& w0, long n, const PppOptions& opts = {});

/// Plain relaxed iteration w^{k+1} = w^k + theta (J(w^k) - w^k) on the
/// reduced variable; the baseline against the fast runs, with the same
/// residual and shadow bookkeeping.
IterationTrace run_km_ppp(const ResolventSystem& sys, double theta, const Vector& w0, long n,
                          const PppOptions& opts = {});

}  // namespace fastkm
