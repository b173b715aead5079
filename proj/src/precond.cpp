#include "fastkm/precond.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "fastkm/solvers.hpp"

namespace fastkm {

ProxFn moreau_prox_conjugate(ProxFn prox_g) {
  return [prox_g = std::move(prox_g)](const Vector& y, double tau) -> Vector {
    if (!(tau > 0.0)) throw std::invalid_argument("moreau_prox_conjugate: tau must be > 0");
    return y - tau * prox_g(y / tau, 1.0 / tau);
  };
}

ResolventSystem build_pdhg(const PdhgProblem& prob) {
  if (!(prob.tau1 > 0.0 && prob.tau2 > 0.0))
    throw std::invalid_argument("build_pdhg: step sizes must be > 0");
  const Eigen::Index nx = prob.L.input_dim;
  const Eigen::Index ny = prob.L.output_dim;
  const double tau1 = prob.tau1;
  const double tau2 = prob.tau2;
  auto L = prob.L;
  auto prox_f = prob.prox_f;
  auto prox_gstar = prob.prox_gstar;

  ResolventSystem sys;
  sys.reduced_dim = nx + ny;
  sys.resolvent = [nx, ny, tau1, tau2, L, prox_f, prox_gstar](const Vector& u) -> ResolventResult {
    if (u.size() != nx + ny) throw std::invalid_argument("pdhg resolvent: bad iterate size");
    const Vector x = u.head(nx);
    const Vector y = u.tail(ny);
    Vector xp = prox_f(x - tau1 * L.apply_adjoint(y), tau1);
    Vector yp = prox_gstar(y + tau2 * L.apply(2.0 * xp - x), tau2);
    ResolventResult r;
    r.next.resize(nx + ny);
    r.next.head(nx) = xp;
    r.next.tail(ny) = yp;
    r.shadows = {std::move(xp), std::move(yp)};
    return r;
  };
  sys.m_form = [nx, ny, tau1, tau2, L](const Vector& a, const Vector& b) -> double {
    const Vector ax = a.head(nx), ay = a.tail(ny);
    const Vector bx = b.head(nx), by = b.tail(ny);
    return ax.dot(bx) / tau1 - L.apply(ax).dot(by) - L.apply(bx).dot(ay) + ay.dot(by) / tau2;
  };
  const double lnorm = estimate_operator_norm(prob.L, 300, 0xf457u);
  sys.step_condition_ok = (tau1 * tau2 * lnorm * lnorm < 1.0);
  return sys;
}

ResolventSystem build_drs(ResolventFn JA1, ResolventFn JA2, Eigen::Index dim) {
  ResolventSystem sys;
  sys.reduced_dim = dim;
  sys.resolvent = [JA1 = std::move(JA1), JA2 = std::move(JA2)](const Vector& w) -> ResolventResult {
    Vector x1 = JA1(w);
    Vector x2 = JA2(2.0 * x1 - w);
    ResolventResult r;
    r.next = w + x2 - x1;
    r.shadows = {std::move(x1), std::move(x2)};
    return r;
  };
  sys.m_form = [](const Vector& a, const Vector& b) { return a.dot(b); };
  return sys;
}

Matrix path_graph_Z(int N) {
  if (N < 2) throw std::invalid_argument("path_graph_Z: N must be >= 2");
  Matrix Z = Matrix::Zero(N, N - 1);
  for (int j = 0; j < N - 1; ++j) {
    Z(j, j) = 1.0;
    Z(j + 1, j) = -1.0;
  }
  return Z;
}

ResolventSystem build_graph_drs(const GraphDrsSpec& spec) {
  const Eigen::Index N = spec.Z.rows();
  if (N < 2 || spec.Z.cols() != N - 1)
    throw std::invalid_argument("build_graph_drs: Z must be N x (N-1) with N >= 2");
  if (static_cast<Eigen::Index>(spec.proxes.size()) != N)
    throw std::invalid_argument("build_graph_drs: need one prox per node");
  if (!(spec.tau > 0.0)) throw std::invalid_argument("build_graph_drs: tau must be > 0");
  if (spec.block_dim <= 0) throw std::invalid_argument("build_graph_drs: block_dim must be > 0");
  Matrix Zhat = spec.Zhat;
  if (Zhat.size() == 0) Zhat = Matrix::Zero(N, N - 1);
  if (Zhat.rows() != N || Zhat.cols() != N - 1)
    throw std::invalid_argument("build_graph_drs: Zhat must be N x (N-1)");

  const Vector ones = Vector::Ones(N);
  if ((spec.Z.transpose() * ones).lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::invalid_argument("build_graph_drs: Z^T 1 must vanish");
  if ((Zhat.transpose() * ones).lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::invalid_argument("build_graph_drs: Zhat^T 1 must vanish");
  Eigen::ColPivHouseholderQR<Matrix> qr(spec.Z);
  if (qr.rank() != N - 1) throw std::invalid_argument("build_graph_drs: Z must have rank N-1");

  const Matrix Lmat = spec.Z * spec.Z.transpose();
  const Matrix S = Lmat + Zhat * Zhat.transpose();  // L + Lhat
  Vector d = S.diagonal();
  for (Eigen::Index i = 0; i < N; ++i)
    if (!(d[i] > 0.0)) throw std::invalid_argument("build_graph_drs: diagonal entry d_i must be > 0");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(Lmat);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("build_graph_drs: eigendecomposition failed");
  // Kernel is exactly span{1}; the second-smallest eigenvalue is the smallest
  // nonzero one.
  const double lambda1 = eig.eigenvalues()[1];
  if (!(lambda1 > 0.0)) throw std::runtime_error("build_graph_drs: lambda_1 must be positive");

  const Eigen::Index bd = spec.block_dim;
  auto proxes = spec.proxes;
  const Matrix Z = spec.Z;
  const double tau = spec.tau;

  ResolventSystem sys;
  sys.reduced_dim = (N - 1) * bd;
  sys.lambda1 = lambda1;
  sys.resolvent = [N, bd, tau, Z, S, d, proxes](const Vector& w) -> ResolventResult {
    if (w.size() != (N - 1) * bd) throw std::invalid_argument("graph resolvent: bad iterate size");
    BlockVector x(static_cast<size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) {
      Vector arg = Vector::Zero(bd);
      for (Eigen::Index j = 0; j < N - 1; ++j)
        if (Z(i, j) != 0.0) arg += Z(i, j) * w.segment(j * bd, bd);
      for (Eigen::Index h = 0; h < i; ++h)
        if (S(h, i) != 0.0) arg -= 2.0 * S(h, i) * x[static_cast<size_t>(h)];
      x[static_cast<size_t>(i)] = proxes[static_cast<size_t>(i)](arg / d[i], tau / d[i]);
    }
    ResolventResult r;
    r.next.resize((N - 1) * bd);
    for (Eigen::Index j = 0; j < N - 1; ++j) {
      Vector wj = w.segment(j * bd, bd);
      for (Eigen::Index i = 0; i < N; ++i)
        if (Z(i, j) != 0.0) wj -= Z(i, j) * x[static_cast<size_t>(i)];
      r.next.segment(j * bd, bd) = wj;
    }
    r.shadows = std::move(x);
    return r;
  };
  sys.m_form = [](const Vector& a, const Vector& b) { return a.dot(b); };
  return sys;
}

double variance(const BlockVector& points) {
  if (points.empty()) throw std::invalid_argument("variance: need at least one block");
  const Eigen::Index bd = points.front().size();
  Vector mean = Vector::Zero(bd);
  for (const auto& p : points) {
    if (p.size() != bd) throw std::invalid_argument("variance: block length mismatch");
    mean += p;
  }
  mean /= static_cast<double>(points.size());
  double v = 0.0;
  for (const auto& p : points) v += (p - mean).squaredNorm();
  return v / static_cast<double>(points.size());
}

IterationTrace run_fast_ppp(const ResolventSystem& sys, const ScheduleParams& p, const Vector& w_m1,
                            const Vector& w0, long n, const PppOptions& opts) {
  ScheduleParams q = p;
  q.resolve();
  const double s = q.s;

  auto stash = std::make_shared<ResolventResult>();
  const ResolventSystem* sp = &sys;
  NonexpansiveOp Ttil;
  Ttil.dim = sys.reduced_dim;
  Ttil.eval = [sp, stash, s](const Vector& w) -> Vector {
    *stash = sp->resolvent(w);
    if (s == 1.0) return stash->next;
    return w + s * (stash->next - w);
  };

  std::vector<StepRecord> records;
  records.reserve(static_cast<size_t>(n));
  std::vector<std::pair<long, BlockVector>> shadow_snaps;

  SolveOptions inner;
  inner.snapshot_stride = opts.snapshot_stride;
  inner.stop_residual = opts.stop_residual;  // plain-norm residual of T, convenience only
  inner.on_step = [&](long k, const Vector& w, const Vector&, double) {
    const double rres = std::sqrt(std::max(0.0, sys.seminorm_sq(w, stash->next)));
    StepRecord rec;
    rec.k = k;
    rec.residual = rres;
    if (sys.lambda1) rec.variance = variance(stash->shadows);
    records.push_back(std::move(rec));
    if (opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0)
      shadow_snaps.emplace_back(k, stash->shadows);
    if (opts.on_step) opts.on_step(k, w, stash->next, stash->shadows, rres);
  };

  ScheduleParams inner_params = q;
  inner_params.s = 1.0;  // the step is folded into the operator above
  IterationTrace trace = run_fast_km(Ttil, w_m1, w0, inner_params, n, inner);
  trace.solver = "fast_ppp";
  trace.params = q;
  trace.steps = std::move(records);
  trace.shadow_snapshots = std::move(shadow_snaps);
  trace.shadows_last = stash->shadows;
  return trace;
}

IterationTrace run_km_ppp(const ResolventSystem& sys, double theta, const Vector& w0, long n,
                          const PppOptions& opts) {
  auto stash = std::make_shared<ResolventResult>();
  const ResolventSystem* sp = &sys;
  NonexpansiveOp TJ;
  TJ.dim = sys.reduced_dim;
  TJ.eval = [sp, stash](const Vector& w) -> Vector {
    *stash = sp->resolvent(w);
    return stash->next;
  };

  std::vector<StepRecord> records;
  records.reserve(static_cast<size_t>(n));
  std::vector<std::pair<long, BlockVector>> shadow_snaps;

  SolveOptions inner;
  inner.snapshot_stride = opts.snapshot_stride;
  inner.stop_residual = opts.stop_residual;
  inner.on_step = [&](long k, const Vector& w, const Vector&, double) {
    const double rres = std::sqrt(std::max(0.0, sys.seminorm_sq(w, stash->next)));
    StepRecord rec;
    rec.k = k;
    rec.residual = rres;
    if (sys.lambda1) rec.variance = variance(stash->shadows);
    records.push_back(std::move(rec));
    if (opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0)
      shadow_snaps.emplace_back(k, stash->shadows);
    if (opts.on_step) opts.on_step(k, w, stash->next, stash->shadows, rres);
  };

  IterationTrace trace = run_km(TJ, w0, theta, n, inner);
  trace.solver = "km_ppp";
  trace.steps = std::move(records);
  trace.shadow_snapshots = std::move(shadow_snaps);
  trace.shadows_last = stash->shadows;
  return trace;
}

}  // namespace fastkm
