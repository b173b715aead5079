#include "fastkm/bench/problems.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fastkm::bench {

namespace {

inline Eigen::Index node(int p, int i, int j) { return static_cast<Eigen::Index>(i) * p + j; }

}  // namespace

LinearMap build_grad(int p) {
  if (p < 2) throw std::invalid_argument("build_grad: p must be >= 2");
  const Eigen::Index n = static_cast<Eigen::Index>(p) * p;
  LinearMap G;
  G.input_dim = n;
  G.output_dim = 2 * n;
  G.apply = [p, n](const Vector& u) -> Vector {
    Vector g = Vector::Zero(2 * n);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        if (i + 1 < p) g[node(p, i, j)] = u[node(p, i + 1, j)] - u[node(p, i, j)];
        if (j + 1 < p) g[n + node(p, i, j)] = u[node(p, i, j + 1)] - u[node(p, i, j)];
      }
    return g;
  };
  G.apply_adjoint = [p, n](const Vector& s) -> Vector {
    Vector u = Vector::Zero(n);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        if (i + 1 < p) {
          const double sx = s[node(p, i, j)];
          u[node(p, i + 1, j)] += sx;
          u[node(p, i, j)] -= sx;
        }
        if (j + 1 < p) {
          const double sy = s[n + node(p, i, j)];
          u[node(p, i, j + 1)] += sy;
          u[node(p, i, j)] -= sy;
        }
      }
    return u;
  };
  return G;
}

LinearMap build_div(int p) {
  if (p < 2) throw std::invalid_argument("build_div: p must be >= 2");
  LinearMap grad = build_grad(p);
  LinearMap D;
  D.input_dim = grad.output_dim;
  D.output_dim = grad.input_dim;
  D.apply = [grad](const Vector& s) -> Vector { return -grad.apply_adjoint(s); };
  D.apply_adjoint = [grad](const Vector& u) -> Vector { return -grad.apply(u); };
  return D;
}

BeckmannProblem gen_beckmann(int p, MarginalMode mode, unsigned seed, double tau1, double tau2) {
  if (p < 2) throw std::invalid_argument("gen_beckmann: p must be >= 2");
  const Eigen::Index n = static_cast<Eigen::Index>(p) * p;
  Vector mu = Vector::Zero(n), nu = Vector::Zero(n);
  if (mode == MarginalMode::two_points) {
    const int b = std::min(3, p);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) {
        mu[node(p, i, j)] = 1.0;
        nu[node(p, p - 1 - i, p - 1 - j)] = 1.0;
      }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) mu[i] = unif(rng);
    for (Eigen::Index i = 0; i < n; ++i) nu[i] = unif(rng);
  }
  mu /= mu.sum();
  nu /= nu.sum();
  if (std::abs(mu.sum() - 1.0) > 1e-12 || std::abs(nu.sum() - 1.0) > 1e-12 || mu.minCoeff() < 0.0 ||
      nu.minCoeff() < 0.0)
    throw std::invalid_argument("gen_beckmann: marginals must be normalized and nonnegative");

  BeckmannProblem prob;
  prob.p = p;
  prob.mu = mu;
  prob.nu = nu;
  prob.pdhg.L = build_div(p);
  prob.pdhg.tau1 = tau1;
  prob.pdhg.tau2 = tau2;
  prob.pdhg.prox_f = [n](const Vector& v, double tau) -> Vector {
    Eigen::Map<const Matrix> rows(v.data(), n, 2);
    Matrix out = group_soft_threshold(rows, tau);
    return Eigen::Map<Vector>(out.data(), 2 * n);
  };
  const Vector target = mu - nu;
  ProxFn prox_g = [target](const Vector&, double) -> Vector { return target; };
  prob.pdhg.prox_gstar = moreau_prox_conjugate(prox_g);
  prob.objective = [n](const Vector& v) -> double {
    Eigen::Map<const Matrix> rows(v.data(), n, 2);
    double obj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) obj += rows.row(i).norm();
    return obj;
  };
  prob.gstar_value = [target](const Vector& y) -> double { return target.dot(y); };
  return prob;
}

MedianProblem median_from_points(std::vector<Vector> points) {
  const int N = static_cast<int>(points.size());
  if (N < 2) throw std::invalid_argument("median_from_points: need at least two points");
  const Eigen::Index d = points.front().size();
  MedianProblem prob;
  prob.points = std::move(points);
  prob.spec.Z = path_graph_Z(N);
  prob.spec.Zhat = Matrix();
  prob.spec.tau = 1.0;
  prob.spec.block_dim = d;
  for (int i = 0; i < N; ++i) {
    const Vector xi = prob.points[static_cast<size_t>(i)];
    prob.spec.proxes.push_back([xi](const Vector& v, double t) -> Vector {
      const Vector diff = v - xi;
      const double nrm = diff.norm();
      if (nrm <= t) return xi;
      return xi + (1.0 - t / nrm) * diff;
    });
  }
  return prob;
}

MedianProblem gen_median(int N, int d, unsigned seed) {
  if (N < 2) throw std::invalid_argument("gen_median: N must be >= 2");
  if (d < 1) throw std::invalid_argument("gen_median: d must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> points;
  points.reserve(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    Vector x(d);
    for (int j = 0; j < d; ++j) x[j] = gauss(rng);
    points.push_back(std::move(x));
  }
  return median_from_points(std::move(points));
}

double median_subgradient_residual(const Vector& x, const std::vector<Vector>& points) {
  Vector g = Vector::Zero(x.size());
  for (const auto& xi : points) {
    const Vector diff = x - xi;
    const double nrm = diff.norm();
    if (nrm == 0.0) continue;  // kink: this term contributes any unit ball element
    g += diff / nrm;
  }
  return g.norm();
}

NonexpansiveOp skew_toy(int d, double tau) { return skew_resolvent_op(d, tau); }

namespace {

ResolventFn l1_prox() {
  return [](const Vector& w) -> Vector { return soft_threshold(w, 1e-3); };
}

ResolventFn ball_dist_prox() {
  Vector center(2);
  center << 1.0, 1.0;
  return [center](const Vector& w) -> Vector {
    return prox_half_sq_dist(
        w, [center](const Vector& x) { return project_ball(x, center, 1.0); }, 1.0);
  };
}

}  // namespace

ResolventSystem l1_ball_toy() { return build_drs(l1_prox(), ball_dist_prox(), 2); }

std::vector<ProxFn> l1_ball_toy_proxes() {
  Vector center(2);
  center << 1.0, 1.0;
  std::vector<ProxFn> proxes;
  proxes.push_back([](const Vector& v, double t) -> Vector { return soft_threshold(v, t * 1e-3); });
  proxes.push_back([center](const Vector& v, double t) -> Vector {
    return prox_half_sq_dist(
        v, [center](const Vector& x) { return project_ball(x, center, 1.0); }, t);
  });
  return proxes;
}

}  // namespace fastkm::bench
