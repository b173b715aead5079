#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fastkm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ordered tuple of vectors; models the product space H^N. Blocks may have
/// different lengths.
using BlockVector = std::vector<Vector>;

inline double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: size mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  return a.dot(b);
}

inline double norm(const Vector& a) { return a.norm(); }

/// Bounded linear map given through its action and the action of its adjoint.
/// Closure-backed so that structured operators (grid divergence, block maps)
/// are never materialized densely.
struct LinearMap {
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> apply_adjoint;
  Eigen::Index input_dim = 0;
  Eigen::Index output_dim = 0;
};

/// Wraps a dense matrix as a LinearMap.
LinearMap dense_map(Matrix A);

/// Materializes a LinearMap column by column. Small dimensions only.
Matrix to_dense(const LinearMap& L);

/// Power iteration on L^T L started from a seeded random direction. The
/// returned value is a lower estimate of ||L|| that is nondecreasing in
/// `iters`. A zero map yields 0.
double estimate_operator_norm(const LinearMap& L, int iters, unsigned seed);

/// A nonexpansive operator T: R^d -> R^d, optionally with a known fixed point
/// used by diagnostics and tests.
struct NonexpansiveOp {
  std::function<Vector(const Vector&)> eval;
  Eigen::Index dim = 0;
  std::optional<Vector> known_fixed_point;
};

/// Component-wise shrinkage sign(v_i) max(0, |v_i| - tau); the prox of
/// tau*||.||_1. Requires tau >= 0.
Vector soft_threshold(const Vector& v, double tau);

/// Row-wise shrinkage max(0, 1 - tau/||row||) * row, with zero rows mapped to
/// zero; the prox of the group-lasso penalty tau*||.||_{2,1} on stacked rows.
Matrix group_soft_threshold(const Matrix& rows, double tau);

/// Euclidean projection onto the closed ball B(center, radius).
Vector project_ball(const Vector& x, const Vector& center, double radius);

/// Prox of tau/2 * dist^2(., C) where `project` is the metric projection onto
/// the closed convex set C: returns (x + tau P_C(x)) / (1 + tau).
Vector prox_half_sq_dist(const Vector& x, const std::function<Vector(const Vector&)>& project,
                         double tau);

/// Resolvent (I + tau*Sigma)^{-1} of the skew-symmetric block matrix
/// Sigma = [[0, I], [-I, 0]] on R^d, d even, via its closed-form inverse
/// (1 + tau^2)^{-1} [[I, -tau I], [tau I, I]]. Fixed point: the origin.
NonexpansiveOp skew_resolvent_op(Eigen::Index d, double tau);

/// The relaxed operator T_s := (1-s) I + s T for s in (0, 2]. Same fixed
/// points as T; for s > 1 the caller asserts firm nonexpansiveness of T.
NonexpansiveOp averaged_map(NonexpansiveOp T, double s);

}  // namespace fastkm
