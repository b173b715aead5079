#pragma once

#include <functional>
#include <vector>

#include "fastkm/operators.hpp"
#include "fastkm/precond.hpp"

namespace fastkm::bench {

/// Discrete divergence with Neumann boundary conditions on the p x p grid,
/// acting on flux fields sigma in R^{n x 2} (n = p^2, flattened column-wise:
/// the x-component block first, then the y-component block) and returning
/// node values. Defined as -Grad^T for the forward-difference gradient
/// (Grad u)^x_{i,j} = u_{i+1,j} - u_{i,j} (zero at i = p; analogously in j),
/// so that <Grad u, sigma> = -<u, Div sigma> holds exactly. Nodes are ordered
/// row-major.
LinearMap build_div(int p);

/// Gradient paired with build_div; used by adjointness oracles.
LinearMap build_grad(int p);

enum class MarginalMode { two_points, random };

struct BeckmannProblem {
  PdhgProblem pdhg;
  Vector mu;
  Vector nu;
  int p = 0;
  /// ||sigma||_{2,1} over the n x 2 rows.
  std::function<double(const Vector&)> objective;
  /// g*(y) = <mu - nu, y> for g the indicator of {mu - nu}.
  std::function<double(const Vector&)> gstar_value;
};

/// Minimal-flow formulation min ||sigma||_{2,1} s.t. Div sigma = mu - nu,
/// wired as a primal-dual problem: f the group-lasso penalty (group
/// soft-threshold prox), g the indicator of {mu - nu} (conjugate prox via the
/// Moreau identity), L = Div. `two_points` places normalized 3x3 indicator
/// bumps at opposite grid corners; `random` draws normalized positive
/// marginals from the seeded generator.
BeckmannProblem gen_beckmann(int p, MarginalMode mode, unsigned seed, double tau1, double tau2);

struct MedianProblem {
  GraphDrsSpec spec;
  std::vector<Vector> points;
};

/// Geometric median of N Gaussian sample points in R^d: one prox per term
/// v -> x_i + max(0, 1 - t/||v - x_i||)(v - x_i), the path-graph Z, Zhat = 0,
/// tau = 1.
MedianProblem gen_median(int N, int d, unsigned seed);

/// Same wiring for a caller-supplied sample.
MedianProblem median_from_points(std::vector<Vector> points);

/// ||sum_i (x - x_i)/||x - x_i|| ||, the stationarity measure of the median
/// objective away from the sample points.
double median_subgradient_residual(const Vector& x, const std::vector<Vector>& points);

/// T = (I + tau Sigma)^{-1} for the block skew matrix; fixed point 0.
NonexpansiveOp skew_toy(int d, double tau);

/// The two-term splitting toy: f1 = 1e-3 |.|_1 and f2 = 1/2 dist^2(., B) with
/// B the unit ball centered at (1, 1), as a Douglas-Rachford system on R^2.
ResolventSystem l1_ball_toy();

/// The same two resolvents as parameterized proxes, for graph-splitting runs.
std::vector<ProxFn> l1_ball_toy_proxes();

}  // namespace fastkm::bench
