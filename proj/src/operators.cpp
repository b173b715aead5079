#include "fastkm/operators.hpp"

#include <cmath>
#include <memory>
#include <random>

namespace fastkm {

LinearMap dense_map(Matrix A) {
  auto mat = std::make_shared<Matrix>(std::move(A));
  LinearMap L;
  L.input_dim = mat->cols();
  L.output_dim = mat->rows();
  L.apply = [mat](const Vector& x) -> Vector { return (*mat) * x; };
  L.apply_adjoint = [mat](const Vector& y) -> Vector { return mat->transpose() * y; };
  return L;
}

Matrix to_dense(const LinearMap& L) {
  Matrix A(L.output_dim, L.input_dim);
  Vector e = Vector::Zero(L.input_dim);
  for (Eigen::Index j = 0; j < L.input_dim; ++j) {
    e[j] = 1.0;
    A.col(j) = L.apply(e);
    e[j] = 0.0;
  }
  return A;
}

double estimate_operator_norm(const LinearMap& L, int iters, unsigned seed) {
  if (iters < 1) throw std::invalid_argument("estimate_operator_norm: iters must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(L.input_dim);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  v /= nv;
  double est = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector Lv = L.apply(v);
    est = Lv.norm();  // Rayleigh estimate sqrt(v^T L^T L v), v unit
    if (est == 0.0) return 0.0;
    Vector w = L.apply_adjoint(Lv);
    double nw = w.norm();
    if (nw == 0.0) break;
    v = w / nw;
  }
  return est;
}

Vector soft_threshold(const Vector& v, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau must be >= 0");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double mag = std::abs(v[i]) - tau;
    out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

Matrix group_soft_threshold(const Matrix& rows, double tau) {
  if (tau < 0.0) throw std::invalid_argument("group_soft_threshold: tau must be >= 0");
  Matrix out = Matrix::Zero(rows.rows(), rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double nrm = rows.row(i).norm();
    if (nrm > tau) out.row(i) = (1.0 - tau / nrm) * rows.row(i);
  }
  return out;
}

Vector project_ball(const Vector& x, const Vector& center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("project_ball: radius must be > 0");
  Vector diff = x - center;
  double d = diff.norm();
  if (d <= radius) return x;
  return center + (radius / d) * diff;
}

Vector prox_half_sq_dist(const Vector& x, const std::function<Vector(const Vector&)>& project,
                         double tau) {
  if (tau < 0.0) throw std::invalid_argument("prox_half_sq_dist: tau must be >= 0");
  return (x + tau * project(x)) / (1.0 + tau);
}

NonexpansiveOp skew_resolvent_op(Eigen::Index d, double tau) {
  if (d <= 0 || d % 2 != 0) throw std::invalid_argument("skew_resolvent_op: d must be even");
  if (tau <= 0.0) throw std::invalid_argument("skew_resolvent_op: tau must be > 0");
  const Eigen::Index h = d / 2;
  const double scale = 1.0 / (1.0 + tau * tau);
  NonexpansiveOp T;
  T.dim = d;
  T.known_fixed_point = Vector::Zero(d);
  T.eval = [h, tau, scale](const Vector& x) -> Vector {
    Vector out(2 * h);
    out.head(h) = scale * (x.head(h) - tau * x.tail(h));
    out.tail(h) = scale * (tau * x.head(h) + x.tail(h));
    return out;
  };
  return T;
}

NonexpansiveOp averaged_map(NonexpansiveOp T, double s) {
  if (!(s > 0.0 && s <= 2.0)) throw std::invalid_argument("averaged_map: s must be in (0, 2]");
  if (s == 1.0) return T;
  NonexpansiveOp Ts;
  Ts.dim = T.dim;
  Ts.known_fixed_point = T.known_fixed_point;
  auto inner = std::move(T.eval);
  Ts.eval = [inner, s](const Vector& x) -> Vector { return (1.0 - s) * x + s * inner(x); };
  return Ts;
}

}  // namespace fastkm
