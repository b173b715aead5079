#include "fastkm/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace fastkm {

double gap_function(const Vector& x, const Vector& Tx, const Vector& z_star) {
  Vector q = x - Tx;
  return q.dot(Tx - z_star) + 0.5 * q.squaredNorm();
}

double primal_dual_gap(const std::function<double(const Vector&)>& f_value,
                       const std::function<double(const Vector&)>& gstar_value, const LinearMap& L,
                       const Vector& x, const Vector& y, const Vector& x_star,
                       const Vector& y_star) {
  const double lag_x_ystar = f_value(x) + L.apply(x).dot(y_star) - gstar_value(y_star);
  const double lag_xstar_y = f_value(x_star) + L.apply(x_star).dot(y) - gstar_value(y);
  return lag_x_ystar - lag_xstar_y;
}

double lyapunov_energy(const LyapunovState& st, long k, const Vector& z_km1, const Vector& z_k,
                       const Vector& x_km1, const InnerProduct& inner) {
  if (k < 1) throw std::invalid_argument("lyapunov_energy: defined for k >= 1");
  if (z_km1.size() == 0 || z_k.size() == 0 || x_km1.size() == 0)
    throw std::invalid_argument("lyapunov_energy: insufficient history");
  const auto ip = inner ? inner : InnerProduct([](const Vector& a, const Vector& b) { return a.dot(b); });
  const Vector Qk = x_km1 - z_k;
  const double tkm1 = st.t(k - 1);
  const double delta_k = st.eta * st.lambda * tkm1;
  const double xi_k = (1.0 - st.eta) * st.eta * tkm1 * tkm1;
  const Vector zs = z_km1 - st.z_star;
  const Vector vk = st.lambda * zs + tkm1 * (z_k - z_km1 + (1.0 - st.eta) * Qk);
  const double qq = ip(Qk, Qk);
  return delta_k * ip(Qk, z_k - st.z_star) + 0.5 * (delta_k + xi_k) * qq +
         0.5 * st.c() * ip(zs, zs) + 0.5 * ip(vk, vk);
}

ExplicitBounds explicit_residual_bound(double E1, double eta, double alpha, double t_km1) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("explicit_residual_bound: eta must be interior to (0, 1)");
  if (!(t_km1 > 0.0)) throw std::invalid_argument("explicit_residual_bound: t_{k-1} must be > 0");
  ExplicitBounds b;
  b.residual_sq = 2.0 * E1 / (eta * (1.0 - eta) * t_km1 * t_km1);
  b.gap = E1 / (eta * (alpha - 1.0) * t_km1);
  return b;
}

double rate_slope(const std::vector<double>& ks, const std::vector<double>& values, double k_lo,
                  double k_hi) {
  if (ks.size() != values.size()) throw std::invalid_argument("rate_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < k_lo || ks[i] > k_hi) continue;
    if (!(values[i] > 0.0)) throw std::invalid_argument("rate_slope: values must be positive");
    const double lx = std::log(ks[i]);
    const double ly = std::log(values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 10) throw std::invalid_argument("rate_slope: need at least 10 points in window");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace fastkm
