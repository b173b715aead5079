#include "fastkm/solvers.hpp"

#include <chrono>
#include <stdexcept>

#include "fastkm/diagnostics.hpp"

namespace fastkm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_dim(const NonexpansiveOp& T, const Vector& x, const char* who) {
  if (x.size() != T.dim)
    throw std::invalid_argument(std::string(who) + ": iterate size " + std::to_string(x.size()) +
                                " does not match operator dim " + std::to_string(T.dim));
}

}  // namespace

IterationTrace run_km(const NonexpansiveOp& T, const Vector& x0, double theta, long n,
                      const SolveOptions& opts) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("run_km: theta must be in (0, 1)");
  if (n < 1) throw std::invalid_argument("run_km: n must be >= 1");
  check_dim(T, x0, "run_km");
  const auto start = Clock::now();

  IterationTrace trace;
  trace.solver = "km";
  trace.steps.reserve(static_cast<size_t>(n));
  Vector x = x0;
  Vector Tx;
  for (long k = 0; k < n; ++k) {
    Tx = T.eval(x);
    ++trace.t_evals;
    const double res = (x - Tx).norm();
    StepRecord rec;
    rec.k = k;
    rec.residual = res;
    if (opts.record_gap && opts.z_star) rec.gap = gap_function(x, Tx, *opts.z_star);
    trace.steps.push_back(std::move(rec));
    if (opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0) trace.snapshots.emplace_back(k, x);
    if (opts.on_step) opts.on_step(k, x, Tx, res);
    x += theta * (Tx - x);
    if (opts.stop_residual && res <= *opts.stop_residual) break;
  }
  trace.x_last = std::move(x);
  trace.Tx_last = std::move(Tx);
  trace.wall_ms = elapsed_ms(start);
  return trace;
}

IterationTrace run_fast_km(const NonexpansiveOp& T, const Vector& x_m1, const Vector& x0,
                           const ScheduleParams& p, long n, const SolveOptions& opts) {
  if (n < 1) throw std::invalid_argument("run_fast_km: n must be >= 1");
  if (x_m1.size() != x0.size()) throw std::invalid_argument("run_fast_km: x^{-1} and x^0 size mismatch");
  check_dim(T, x0, "run_fast_km");
  ScheduleParams q = p;
  q.resolve();
  if (opts.record_energy) {
    if (!opts.z_star) throw std::invalid_argument("run_fast_km: energy recording needs z_star");
    if (q.cooling != CoolingMode::none)
      throw std::invalid_argument("run_fast_km: energy is defined for constant alpha only");
  }
  const NonexpansiveOp Teff = (q.s != 1.0) ? averaged_map(T, q.s) : T;
  const auto start = Clock::now();

  LyapunovState lyap;
  if (opts.record_energy) {
    lyap.alpha = q.alpha;
    lyap.sigma = q.sigma;
    lyap.eta = q.eta_effective();
    lyap.lambda = opts.energy_lambda < 0.0 ? q.alpha - 1.0 : opts.energy_lambda;
    lyap.z_star = *opts.z_star;
  }

  IterationTrace trace;
  trace.solver = "fast_km";
  trace.params = q;
  trace.steps.reserve(static_cast<size_t>(n));

  Vector x_prev = x_m1;
  Vector x_cur = x0;
  Vector z_prev;                   // T(x^{k-2})
  Vector z_cur = Teff.eval(x_m1);  // T(x^{k-1})
  trace.t_evals = 1;

  for (long k = 0; k < n; ++k) {
    Vector z_next = Teff.eval(x_cur);  // T(x^k)
    ++trace.t_evals;
    const double res = (x_cur - z_next).norm();

    StepRecord rec;
    rec.k = k;
    rec.residual = res;
    if (opts.record_gap && opts.z_star) rec.gap = gap_function(x_cur, z_next, *opts.z_star);
    if (opts.record_energy && k >= 1) rec.energy = lyapunov_energy(lyap, k, z_prev, z_cur, x_prev);
    trace.steps.push_back(std::move(rec));
    if (opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0)
      trace.snapshots.emplace_back(k, x_cur);
    if (opts.on_step) opts.on_step(k, x_cur, z_next, res);

    const StepCoeffs c = schedule_coeffs(k, q);
    Vector x_next = x_cur + c.theta_k * (z_next - x_cur) + c.alpha_k * (z_next - z_cur);

    x_prev = std::move(x_cur);
    x_cur = std::move(x_next);
    z_prev = std::move(z_cur);
    z_cur = std::move(z_next);
    if (opts.stop_residual && res <= *opts.stop_residual) break;
  }
  trace.x_last = std::move(x_cur);
  trace.Tx_last = std::move(z_cur);
  trace.wall_ms = elapsed_ms(start);
  return trace;
}

HalpernForm halpern_form_of(const NonexpansiveOp& T, const Vector& x_m1, const Vector& x0,
                            double alpha, double sigma) {
  if (!(alpha >= 2.0)) throw std::invalid_argument("halpern_form_of: alpha must be >= 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("halpern_form_of: sigma must be > 0");
  const Vector z0 = T.eval(x_m1);
  const double t0 = sigma - 1.0;
  HalpernForm h;
  h.alpha = alpha;
  h.sigma = sigma;
  h.anchor = (t0 / (alpha - 1.0)) * (x0 - z0) + z0;
  return h;
}

IterationTrace run_anchored_halpern(const NonexpansiveOp& T, const HalpernForm& h, const Vector& x0,
                                    long n, const SolveOptions& opts) {
  if (!(h.alpha >= 2.0)) throw std::invalid_argument("run_anchored_halpern: alpha must be >= 2");
  if (!(h.sigma > 0.0)) throw std::invalid_argument("run_anchored_halpern: sigma must be > 0");
  if (n < 1) throw std::invalid_argument("run_anchored_halpern: n must be >= 1");
  check_dim(T, x0, "run_anchored_halpern");
  const auto start = Clock::now();

  IterationTrace trace;
  trace.solver = "anchored_halpern";
  trace.steps.reserve(static_cast<size_t>(n));
  Vector x = x0;
  Vector Tx;
  for (long k = 0; k < n; ++k) {
    Tx = T.eval(x);
    ++trace.t_evals;
    const double res = (x - Tx).norm();
    StepRecord rec;
    rec.k = k;
    rec.residual = res;
    if (opts.record_gap && opts.z_star) rec.gap = gap_function(x, Tx, *opts.z_star);
    trace.steps.push_back(std::move(rec));
    if (opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0) trace.snapshots.emplace_back(k, x);
    if (opts.on_step) opts.on_step(k, x, Tx, res);
    const double eps_k = (h.alpha - 1.0) / (static_cast<double>(k) + h.sigma);
    x = eps_k * h.anchor + (1.0 - eps_k) * Tx;
    if (opts.stop_residual && res <= *opts.stop_residual) break;
  }
  trace.x_last = std::move(x);
  trace.Tx_last = std::move(Tx);
  trace.wall_ms = elapsed_ms(start);
  return trace;
}

NonexpansiveOp TranDinhMapped::make_operator(std::function<Vector(const Vector&)> G,
                                             Eigen::Index dim) const {
  NonexpansiveOp T;
  T.dim = dim;
  const double c = step;
  T.eval = [G = std::move(G), c](const Vector& x) -> Vector { return x - c * G(x); };
  return T;
}

TranDinhMapped trandinh_map(const TranDinhParams& tp) {
  if (!(tp.omega >= 0.5)) throw std::invalid_argument("trandinh_map: omega must be >= 1/2");
  if (!(tp.gamma_bar > 0.0 && tp.gamma_bar <= 2.0))
    throw std::invalid_argument("trandinh_map: gamma_bar must be in (0, 2]");
  if (!(tp.Lconst > 0.0)) throw std::invalid_argument("trandinh_map: L must be > 0");
  TranDinhMapped m;
  m.params.alpha = 2.0 * tp.omega + 1.0;
  m.params.theta = tp.omega;
  m.params.sigma = 2.0 * tp.omega + 2.0;
  m.params.s = 1.0;
  m.params.resolve();
  m.step = tp.gamma_bar / tp.Lconst;
  return m;
}

IterationTrace run_trandinh_direct(const std::function<Vector(const Vector&)>& G,
                                   const TranDinhParams& tp, const Vector& x_m1, const Vector& x0,
                                   long n) {
  if (n < 1) throw std::invalid_argument("run_trandinh_direct: n must be >= 1");
  if (x_m1.size() != x0.size())
    throw std::invalid_argument("run_trandinh_direct: x^{-1} and x^0 size mismatch");
  const auto start = Clock::now();
  const double c = tp.gamma_bar / tp.Lconst;

  IterationTrace trace;
  trace.solver = "trandinh_direct";
  trace.steps.reserve(static_cast<size_t>(n));

  Vector x_prev = x_m1;
  Vector x_cur = x0;
  Vector g_prev = G(x_m1);
  trace.t_evals = 1;
  for (long k = 0; k < n; ++k) {
    Vector g_cur = G(x_cur);
    ++trace.t_evals;
    StepRecord rec;
    rec.k = k;
    rec.residual = g_cur.norm();
    trace.steps.push_back(std::move(rec));
    trace.snapshots.emplace_back(k, x_cur);

    const double kk = static_cast<double>(k);
    const double tbar = (kk + 1.0) / (kk + 2.0 * tp.omega + 2.0);
    const double ebar = c * (kk + tp.omega + 1.0) / (kk + 2.0 * tp.omega + 2.0);
    const double gbar = c * tbar / ebar;
    Vector x_next = x_cur + tbar * (x_cur - x_prev) - ebar * (g_cur - gbar * g_prev);

    x_prev = std::move(x_cur);
    x_cur = std::move(x_next);
    g_prev = std::move(g_cur);
  }
  trace.x_last = std::move(x_cur);
  trace.wall_ms = elapsed_ms(start);
  return trace;
}

}  // namespace fastkm
