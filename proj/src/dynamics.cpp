#include "fastkm/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace fastkm::dyn {

double DynamicsSpec::beta(double t) const {
  if (beta_mode == BetaMode::constant) return beta0;
  return beta0 * std::pow(t, alpha - 2.0 - epsilon);
}

double DynamicsSpec::beta_dot(double t) const {
  if (beta_mode == BetaMode::constant) return 0.0;
  const double e = alpha - 2.0 - epsilon;
  return beta0 * e * std::pow(t, e - 1.0);
}

void DynamicsSpec::validate() const {
  if (!(alpha >= 2.0)) throw std::invalid_argument("DynamicsSpec: alpha must be >= 2");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("DynamicsSpec: eta must be in [0, 1]");
  if (!(t0 > 0.0)) throw std::invalid_argument("DynamicsSpec: t0 must be > 0");
  if (!(beta0 > 0.0)) throw std::invalid_argument("DynamicsSpec: beta0 must be > 0");
  if (beta_mode == BetaMode::power && !(epsilon >= 0.0 && epsilon <= alpha - 2.0))
    throw std::invalid_argument("DynamicsSpec: power family needs epsilon in [0, alpha-2]");
  if (x0.size() != Q.input_dim || v0.size() != Q.input_dim)
    throw std::invalid_argument("DynamicsSpec: initial data must match Q");
}

Derivs ode_rhs(const DynamicsSpec& spec, double t, const Vector& x, const Vector& v) {
  if (!(t > 0.0)) throw std::invalid_argument("ode_rhs: t must be > 0");
  Derivs d;
  d.dx = v;
  d.dv = -(spec.alpha / t) * v - spec.beta(t) * spec.Q.apply(v) - spec.b(t) * spec.Q.apply(x);
  return d;
}

Trajectory integrate_rk4(const DynamicsSpec& spec, double t_end, double h, int stride) {
  spec.validate();
  if (!(h > 0.0)) throw std::invalid_argument("integrate_rk4: h must be > 0");
  if (!(t_end > spec.t0)) throw std::invalid_argument("integrate_rk4: t_end must be > t0");
  if (stride < 1) stride = 1;
  const long nsteps = static_cast<long>(std::llround((t_end - spec.t0) / h));

  Trajectory traj;
  Vector x = spec.x0;
  Vector v = spec.v0;
  auto record = [&](double t) {
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.v.push_back(v);
    traj.qnorm.push_back(spec.Q.apply(x).norm());
  };
  record(spec.t0);
  for (long i = 0; i < nsteps; ++i) {
    const double t = spec.t0 + static_cast<double>(i) * h;
    const Derivs k1 = ode_rhs(spec, t, x, v);
    const Derivs k2 = ode_rhs(spec, t + 0.5 * h, x + 0.5 * h * k1.dx, v + 0.5 * h * k1.dv);
    const Derivs k3 = ode_rhs(spec, t + 0.5 * h, x + 0.5 * h * k2.dx, v + 0.5 * h * k2.dv);
    const Derivs k4 = ode_rhs(spec, t + h, x + h * k3.dx, v + h * k3.dv);
    x += (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    v += (h / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    if ((i + 1) % stride == 0 || i + 1 == nsteps) record(spec.t0 + static_cast<double>(i + 1) * h);
  }
  return traj;
}

namespace {

Vector as_vec(double re, double im) {
  Vector out(2);
  out << re, im;
  return out;
}

}  // namespace

Vector rotation_closed_form(EdgeMode mode, double c1, double c2, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("rotation_closed_form: t must be > 0");
  const double t2 = t * t;
  const double ct = std::cos(t), st = std::sin(t);
  if (mode == EdgeMode::theta_one) {
    // (c1 (1 - i t) + c2 e^{-it}) / t^2
    return as_vec((c1 + c2 * ct) / t2, (-c1 * t - c2 * st) / t2);
  }
  // (c1 + c2 (1 + i t) e^{-it}) / t^2, with (1 + i t) e^{-it}
  // = (cos t + t sin t) + i (t cos t - sin t)
  return as_vec((c1 + c2 * (ct + t * st)) / t2, c2 * (t * ct - st) / t2);
}

Vector rotation_closed_form_velocity(EdgeMode mode, double c1, double c2, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("rotation_closed_form_velocity: t must be > 0");
  const double t2 = t * t, t3 = t2 * t;
  const double ct = std::cos(t), st = std::sin(t);
  if (mode == EdgeMode::theta_one) {
    // d/dt [c1 (t^{-2} - i t^{-1}) + c2 e^{-it} t^{-2}]
    // = c1 (-2 t^{-3} + i t^{-2}) + c2 e^{-it} (-i t^{-2} - 2 t^{-3})
    const double re = -2.0 * c1 / t3 + c2 * (-st / t2 - 2.0 * ct / t3);
    const double im = c1 / t2 + c2 * (-ct / t2 + 2.0 * st / t3);
    return as_vec(re, im);
  }
  // d/dt [(1 + i t) e^{-it}] = t e^{-it}, so
  // x' = -2 c1 t^{-3} + c2 (e^{-it} t^{-1} - 2 (1 + i t) e^{-it} t^{-3})
  const double phi_re = ct + t * st, phi_im = t * ct - st;
  const double re = -2.0 * c1 / t3 + c2 * (ct / t - 2.0 * phi_re / t3);
  const double im = c2 * (-st / t - 2.0 * phi_im / t3);
  return as_vec(re, im);
}

Trajectory integrate_tikhonov_flow(const LinearMap& Q, double alpha, double beta0, double t0,
                                   const Vector& anchor, const Vector& x0, double t_end, double h,
                                   int stride) {
  if (!(h > 0.0)) throw std::invalid_argument("integrate_tikhonov_flow: h must be > 0");
  if (!(t_end > t0) || !(t0 > 0.0))
    throw std::invalid_argument("integrate_tikhonov_flow: need t_end > t0 > 0");
  if (stride < 1) stride = 1;
  auto rhs = [&](double t, const Vector& x) -> Vector {
    return -beta0 * std::pow(t, alpha - 2.0) * Q.apply(x) - ((alpha - 1.0) / t) * (x - anchor);
  };
  const long nsteps = static_cast<long>(std::llround((t_end - t0) / h));
  Trajectory traj;
  Vector x = x0;
  auto record = [&](double t) {
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.qnorm.push_back(Q.apply(x).norm());
  };
  record(t0);
  for (long i = 0; i < nsteps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((i + 1) % stride == 0 || i + 1 == nsteps) record(t0 + static_cast<double>(i + 1) * h);
  }
  return traj;
}

LinearMap rotation_map() {
  LinearMap Q;
  Q.input_dim = Q.output_dim = 2;
  Q.apply = [](const Vector& x) -> Vector {
    Vector out(2);
    out << -x[1], x[0];
    return out;
  };
  Q.apply_adjoint = [](const Vector& y) -> Vector {
    Vector out(2);
    out << y[1], -y[0];
    return out;
  };
  return Q;
}

LinearMap zero_map(Eigen::Index d) {
  LinearMap Q;
  Q.input_dim = Q.output_dim = d;
  Q.apply = [d](const Vector&) -> Vector { return Vector::Zero(d); };
  Q.apply_adjoint = [d](const Vector&) -> Vector { return Vector::Zero(d); };
  return Q;
}

}  // namespace fastkm::dyn
