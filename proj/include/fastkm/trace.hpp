#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fastkm/operators.hpp"
#include "fastkm/schedule.hpp"

namespace fastkm {

/// One measured iteration. `k` is the index of the iterate the residual is
/// evaluated at; optional fields stay empty where a quantity does not apply.
struct StepRecord {
  long k = 0;
  double residual = 0.0;
  std::optional<double> gap;
  std::optional<double> energy;
  std::optional<double> variance;
};

/// Per-run record of residuals and diagnostic values, plus run metadata.
/// Records are append-only; iterate snapshots are kept only when requested
/// (rolling state inside the solvers stays three deep regardless).
struct IterationTrace {
  std::vector<StepRecord> steps;
  std::vector<std::pair<long, Vector>> snapshots;
  std::vector<std::pair<long, BlockVector>> shadow_snapshots;  // splitting runs only
  BlockVector shadows_last;                                    // splitting runs only
  long t_evals = 0;
  double wall_ms = 0.0;
  std::string solver;
  std::string problem_id;
  std::string z_star_provenance;
  ScheduleParams params;  // resolved copy, where meaningful for the solver
  Vector x_last;          // final produced iterate
  Vector Tx_last;         // last operator value, T(x^{n-1})
};

struct SolveOptions {
  /// Reference fixed point for gap/energy diagnostics. Any fixed point works;
  /// approximate references widen downstream tolerances.
  std::optional<Vector> z_star;
  bool record_gap = false;
  bool record_energy = false;
  double energy_lambda = -1.0;  // < 0 selects lambda = alpha - 1
  int snapshot_stride = 0;      // > 0 keeps every stride-th iterate
  /// Convenience early exit, never on by default: rate measurements need
  /// full traces.
  std::optional<double> stop_residual;
  std::function<void(long k, const Vector& x, const Vector& Tx, double residual)> on_step;
};

}  // namespace fastkm
