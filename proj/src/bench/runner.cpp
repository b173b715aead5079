#include "fastkm/bench/runner.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fastkm/bench/problems.hpp"
#include "fastkm/dynamics.hpp"
#include "fastkm/precond.hpp"
#include "fastkm/solvers.hpp"

namespace fastkm::bench {

namespace {

using nlohmann::json;

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

const std::vector<std::string> kRunKeys = {
    "version",          "problem.kind",     "problem.d",      "problem.tau",
    "problem.p",        "problem.marginals", "problem.tau1",  "problem.tau2",
    "problem.npoints",  "solver.type",      "solver.alpha",   "solver.sigma",
    "solver.eta",       "solver.theta",     "solver.s",       "solver.iters",
    "solver.theta_km",  "solver.alpha_max", "solver.cooling", "run.output",
    "run.seed",         "diagnostics.energy", "diagnostics.gap", "diagnostics.lambda"};

void check_version(const Config& cfg) {
  const long v = cfg.get_int("version", 1);
  if (v != 1) throw ConfigError("unsupported config version " + std::to_string(v));
}

ScheduleParams schedule_from(const Config& cfg, long iters) {
  ScheduleParams p;
  p.alpha = cfg.get_real("solver.alpha", 4.0);
  p.sigma = cfg.get_real("solver.sigma", p.alpha);
  if (cfg.has("solver.eta"))
    p.eta = cfg.get_real("solver.eta");
  else if (cfg.has("solver.theta"))
    p.theta = cfg.get_real("solver.theta");
  else
    p.eta = 0.5;
  p.s = cfg.get_real("solver.s", 1.0);
  const std::string type = cfg.get_string("solver.type", "fast_km");
  if (type == "fast_km_cooled") {
    const std::string mode = cfg.get_string("solver.cooling", "linear");
    if (mode == "linear")
      p.cooling = CoolingMode::linear;
    else if (mode == "log")
      p.cooling = CoolingMode::log;
    else
      throw ConfigError("unknown cooling mode '" + mode + "'");
    p.alpha_max = cfg.get_real("solver.alpha_max", 100.0 * p.alpha);
    p.maxit = iters;
  }
  p.resolve();
  return p;
}

json schedule_meta(const ScheduleParams& p) {
  json j;
  j["alpha"] = p.alpha;
  j["sigma"] = p.sigma;
  j["theta"] = p.theta;
  j["eta"] = p.eta_effective();
  j["s"] = p.s;
  if (p.cooling != CoolingMode::none) {
    json c;
    c["mode"] = p.cooling == CoolingMode::linear ? "linear" : "log";
    c["alpha0"] = p.alpha;
    c["alpha_max"] = p.alpha_max;
    c["saturation_iter"] = p.maxit / 2;
    j["cooling"] = c;
  }
  const auto warns = p.warnings();
  if (!warns.empty()) j["warnings"] = warns;
  return j;
}

struct BuiltRun {
  IterationTrace trace;
  json problem_meta;
  json solver_meta;
};

BuiltRun execute(const Config& cfg) {
  const std::string kind = cfg.get_string("problem.kind");
  const std::string type = cfg.get_string("solver.type", "fast_km");
  const long iters = cfg.get_int("solver.iters", 1000);
  if (iters < 0) throw ConfigError("solver.iters must be >= 0");
  const bool want_energy = cfg.get_bool("diagnostics.energy", false);
  const bool want_gap = cfg.get_bool("diagnostics.gap", false);

  BuiltRun out;
  out.problem_meta["kind"] = kind;

  auto fast_params = [&](double force_alpha = -1.0) {
    ScheduleParams p = schedule_from(cfg, iters);
    if (force_alpha > 0.0) {  // ohm: the anchored special case
      p.alpha = force_alpha;
      p.sigma = force_alpha;
      p.eta.reset();
      p.theta = 1.0;
      p.cooling = CoolingMode::none;
      p.resolve();
    }
    return p;
  };

  if (kind == "skew_toy") {
    const int d = static_cast<int>(cfg.get_int("problem.d", 10));
    const double tau = cfg.get_real("problem.tau", 0.1);
    out.problem_meta["d"] = d;
    out.problem_meta["tau"] = tau;
    const NonexpansiveOp T = skew_toy(d, tau);
    const Vector ones = Vector::Ones(d);

    SolveOptions opts;
    if (want_energy || want_gap) {
      opts.z_star = Vector::Zero(d);
      opts.record_energy = want_energy;
      opts.record_gap = want_gap;
      opts.energy_lambda = cfg.get_real("diagnostics.lambda", -1.0);
    }
    if (iters == 0) {
      out.trace.solver = type;
      out.solver_meta["type"] = type;
      return out;
    }
    if (type == "km") {
      const double th = cfg.get_real("solver.theta_km", 0.5);
      out.trace = run_km(T, ones, th, iters, opts);
      out.solver_meta["theta_km"] = th;
    } else if (type == "fast_km" || type == "fast_km_cooled") {
      const ScheduleParams p = fast_params();
      out.trace = run_fast_km(T, ones, ones, p, iters, opts);
      out.solver_meta = schedule_meta(p);
    } else if (type == "ohm") {
      const ScheduleParams p = fast_params(2.0);
      out.trace = run_fast_km(T, ones, ones, p, iters, opts);
      out.solver_meta = schedule_meta(p);
    } else {
      throw ConfigError("unknown solver.type '" + type + "'");
    }
    if (opts.z_star) out.trace.z_star_provenance = "known fixed point (origin)";
  } else if (kind == "l1_ball_toy" || kind == "beckmann_ot" || kind == "geometric_median") {
    if (want_energy || want_gap)
      throw ConfigError("diagnostics.energy/gap need a known fixed point; use problem.kind = skew_toy");
    ResolventSystem sys;
    Vector w0;
    if (kind == "l1_ball_toy") {
      sys = l1_ball_toy();
      w0 = Vector::Zero(2);
    } else if (kind == "beckmann_ot") {
      const int p = static_cast<int>(cfg.get_int("problem.p", 20));
      const double tau1 = cfg.get_real("problem.tau1", 0.1);
      const double tau2 = cfg.get_real("problem.tau2", 1.0);
      const std::string marg = cfg.get_string("problem.marginals", "two_points");
      const unsigned seed = static_cast<unsigned>(cfg.get_int("run.seed", 0));
      MarginalMode mm;
      if (marg == "two_points")
        mm = MarginalMode::two_points;
      else if (marg == "random")
        mm = MarginalMode::random;
      else
        throw ConfigError("unknown problem.marginals '" + marg + "'");
      BeckmannProblem bp = gen_beckmann(p, mm, seed, tau1, tau2);
      out.problem_meta["p"] = p;
      out.problem_meta["tau1"] = tau1;
      out.problem_meta["tau2"] = tau2;
      out.problem_meta["marginals"] = marg;
      sys = build_pdhg(bp.pdhg);
      out.problem_meta["step_condition_ok"] = sys.step_condition_ok.value_or(false);
      w0 = Vector::Zero(sys.reduced_dim);
    } else {
      const int N = static_cast<int>(cfg.get_int("problem.npoints", 20));
      const int d = static_cast<int>(cfg.get_int("problem.d", 10));
      const unsigned seed = static_cast<unsigned>(cfg.get_int("run.seed", 0));
      MedianProblem mp = gen_median(N, d, seed);
      out.problem_meta["npoints"] = N;
      out.problem_meta["d"] = d;
      sys = build_graph_drs(mp.spec);
      out.problem_meta["lambda1"] = *sys.lambda1;
      w0 = Vector::Zero(sys.reduced_dim);
    }
    if (iters == 0) {
      out.trace.solver = type;
      out.solver_meta["type"] = type;
      return out;
    }
    if (type == "km") {
      const double th = cfg.get_real("solver.theta_km", 0.5);
      out.trace = run_km_ppp(sys, th, w0, iters);
      out.solver_meta["theta_km"] = th;
    } else if (type == "fast_km" || type == "fast_km_cooled") {
      const ScheduleParams p = fast_params();
      out.trace = run_fast_ppp(sys, p, w0, w0, iters);
      out.solver_meta = schedule_meta(p);
    } else if (type == "ohm") {
      const ScheduleParams p = fast_params(2.0);
      out.trace = run_fast_ppp(sys, p, w0, w0, iters);
      out.solver_meta = schedule_meta(p);
    } else {
      throw ConfigError("unknown solver.type '" + type + "'");
    }
  } else {
    throw ConfigError("unknown problem.kind '" + kind + "'");
  }
  out.solver_meta["type"] = type;
  return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "k,residual,residual_times_k,gap,energy,variance\n";
  for (const auto& s : trace.steps) {
    out << s.k << ',' << fmt_full(s.residual) << ','
        << fmt_full(static_cast<double>(s.k) * s.residual) << ',';
    if (s.gap) out << fmt_full(*s.gap);
    out << ',';
    if (s.energy) out << fmt_full(*s.energy);
    out << ',';
    if (s.variance) out << fmt_full(*s.variance);
    out << '\n';
  }
}

RunOutcome run_experiment(const Config& cfg) {
  check_version(cfg);
  cfg.require_known_keys(kRunKeys);
  const std::string output = cfg.get_string("run.output");

  BuiltRun run = execute(cfg);

  RunOutcome outcome;
  outcome.csv = output;
  outcome.meta = output + ".meta.json";
  if (outcome.csv.has_parent_path()) std::filesystem::create_directories(outcome.csv.parent_path());
  {
    std::ofstream f(outcome.csv);
    if (!f) throw std::runtime_error("cannot write trace CSV: " + outcome.csv.string());
    write_trace_csv(f, run.trace);
  }
  json meta;
  meta["schema_version"] = 1;
  meta["problem"] = run.problem_meta;
  meta["solver"] = run.solver_meta;
  meta["run"]["seed"] = cfg.get_int("run.seed", 0);
  meta["run"]["iters"] = cfg.get_int("solver.iters", 1000);
  meta["run"]["output"] = output;
  meta["rng"] = "mt19937_64";
  meta["t_evals"] = run.trace.t_evals;
  meta["wall_ms"] = run.trace.wall_ms;
  if (!run.trace.z_star_provenance.empty()) meta["z_star_provenance"] = run.trace.z_star_provenance;
  {
    std::ofstream f(outcome.meta);
    if (!f) throw std::runtime_error("cannot write metadata sidecar: " + outcome.meta.string());
    f << meta.dump(2) << '\n';
  }
  return outcome;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0;
    long count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
      throw ConfigError("bad grid '" + text + "', expected lo:hi:count");
    if (count == 1) {
      out.push_back(lo);
      return out;
    }
    for (long i = 0; i < count; ++i)
      out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw ConfigError("empty grid '" + text + "'");
  return out;
}

std::vector<RunOutcome> run_sweep(const Config& base, const std::vector<double>& etas,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& sigmas,
                                  const std::filesystem::path& out_dir, int jobs) {
  check_version(base);
  std::filesystem::create_directories(out_dir);
  const std::vector<double> as = alphas.empty() ? std::vector<double>{base.get_real("solver.alpha", 4.0)} : alphas;
  const std::vector<double> ss = sigmas.empty() ? std::vector<double>{base.get_real("solver.sigma", base.get_real("solver.alpha", 4.0))} : sigmas;
  const std::vector<double> es = etas.empty() ? std::vector<double>{base.get_real("solver.eta", 0.5)} : etas;

  std::vector<Config> configs;
  for (double a : as)
    for (double sg : ss)
      for (double e : es) {
        Config c = base;
        c.set("solver.alpha", a);
        c.set("solver.sigma", sg);
        c.set("solver.eta", e);
        std::string name =
            "sweep_eta" + fmt_short(e) + "_alpha" + fmt_short(a) + "_sigma" + fmt_short(sg) + ".csv";
        c.set("run.output", (out_dir / name).string());
        configs.push_back(std::move(c));
      }

  std::vector<RunOutcome> results(configs.size());
  if (jobs < 1) jobs = 1;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto worker = [&](int w) {
    for (size_t i = static_cast<size_t>(w); i < configs.size(); i += static_cast<size_t>(jobs)) {
      try {
        results[i] = run_experiment(configs[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

RunOutcome run_dynamics(const Config& cfg) {
  check_version(cfg);
  cfg.require_known_keys({"version", "dynamics.kind", "dynamics.q", "dynamics.d", "dynamics.alpha",
                          "dynamics.eta", "dynamics.beta0", "dynamics.beta", "dynamics.epsilon",
                          "dynamics.t0", "dynamics.t_end", "dynamics.h", "dynamics.stride",
                          "dynamics.x0", "dynamics.v0", "dynamics.anchor", "run.output"});
  const std::string output = cfg.get_string("run.output");
  const std::string qkind = cfg.get_string("dynamics.q", "rotation");
  LinearMap Q;
  if (qkind == "rotation")
    Q = dyn::rotation_map();
  else if (qkind == "zero")
    Q = dyn::zero_map(cfg.get_int("dynamics.d", 2));
  else
    throw ConfigError("unknown dynamics.q '" + qkind + "'");

  auto vec_of = [&](const std::string& key, Eigen::Index d) -> Vector {
    if (!cfg.has(key)) return Vector::Zero(d);
    const auto arr = cfg.get_real_array(key);
    if (static_cast<Eigen::Index>(arr.size()) != d)
      throw ConfigError("config key '" + key + "' must have " + std::to_string(d) + " entries");
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = arr[static_cast<size_t>(i)];
    return v;
  };

  const double t0 = cfg.get_real("dynamics.t0", 1.0);
  const double t_end = cfg.get_real("dynamics.t_end", 100.0);
  const double h = cfg.get_real("dynamics.h", 1e-3);
  const int stride = static_cast<int>(cfg.get_int("dynamics.stride", 100));
  const std::string kind = cfg.get_string("dynamics.kind", "second_order");

  dyn::Trajectory traj;
  bool second_order = false;
  if (kind == "second_order") {
    second_order = true;
    dyn::DynamicsSpec spec;
    spec.Q = Q;
    spec.alpha = cfg.get_real("dynamics.alpha", 3.0);
    spec.eta = cfg.get_real("dynamics.eta", 0.5);
    spec.beta0 = cfg.get_real("dynamics.beta0", 1.0);
    const std::string bmode = cfg.get_string("dynamics.beta", "constant");
    if (bmode == "constant")
      spec.beta_mode = dyn::BetaMode::constant;
    else if (bmode == "power")
      spec.beta_mode = dyn::BetaMode::power;
    else
      throw ConfigError("unknown dynamics.beta '" + bmode + "'");
    spec.epsilon = cfg.get_real("dynamics.epsilon", 0.0);
    spec.t0 = t0;
    spec.x0 = vec_of("dynamics.x0", Q.input_dim);
    spec.v0 = vec_of("dynamics.v0", Q.input_dim);
    traj = dyn::integrate_rk4(spec, t_end, h, stride);
  } else if (kind == "tikhonov") {
    const Vector anchor = vec_of("dynamics.anchor", Q.input_dim);
    const Vector x0 = vec_of("dynamics.x0", Q.input_dim);
    traj = dyn::integrate_tikhonov_flow(Q, cfg.get_real("dynamics.alpha", 3.0),
                                        cfg.get_real("dynamics.beta0", 1.0), t0, anchor, x0, t_end,
                                        h, stride);
  } else {
    throw ConfigError("unknown dynamics.kind '" + kind + "'");
  }

  RunOutcome outcome;
  outcome.csv = output;
  outcome.meta = output + ".meta.json";
  if (outcome.csv.has_parent_path()) std::filesystem::create_directories(outcome.csv.parent_path());
  std::ofstream f(outcome.csv);
  if (!f) throw std::runtime_error("cannot write trajectory CSV: " + outcome.csv.string());
  const Eigen::Index d = Q.input_dim;
  f << 't';
  for (Eigen::Index i = 0; i < d; ++i) f << ",x" << i;
  if (second_order)
    for (Eigen::Index i = 0; i < d; ++i) f << ",v" << i;
  f << ",qnorm\n";
  for (size_t i = 0; i < traj.t.size(); ++i) {
    f << fmt_full(traj.t[i]);
    for (Eigen::Index j = 0; j < d; ++j) f << ',' << fmt_full(traj.x[i][j]);
    if (second_order)
      for (Eigen::Index j = 0; j < d; ++j) f << ',' << fmt_full(traj.v[i][j]);
    f << ',' << fmt_full(traj.qnorm[i]) << '\n';
  }
  f.close();

  json meta;
  meta["schema_version"] = 1;
  meta["dynamics"]["kind"] = kind;
  meta["dynamics"]["q"] = qkind;
  meta["dynamics"]["t0"] = t0;
  meta["dynamics"]["t_end"] = t_end;
  meta["dynamics"]["h"] = h;
  std::ofstream mf(outcome.meta);
  mf << meta.dump(2) << '\n';
  return outcome;
}

void write_plotdata(const std::vector<std::filesystem::path>& inputs, std::ostream& out) {
  out << "source,index,metric,value\n";
  for (const auto& path : inputs) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open input CSV: " + path.string());
    std::string header;
    if (!std::getline(f, header)) continue;
    std::vector<std::string> cols;
    {
      std::stringstream hs(header);
      std::string c;
      while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    const std::string source = path.stem().string();
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      std::stringstream ls(line);
      std::string cell, index;
      size_t j = 0;
      while (std::getline(ls, cell, ',')) {
        if (j == 0)
          index = cell;
        else if (!cell.empty() && j < cols.size())
          out << source << ',' << index << ',' << cols[j] << ',' << cell << '\n';
        ++j;
      }
    }
  }
}

}  // namespace fastkm::bench
