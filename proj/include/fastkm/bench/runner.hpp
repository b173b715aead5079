#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fastkm/bench/config.hpp"
#include "fastkm/trace.hpp"

namespace fastkm::bench {

struct RunOutcome {
  std::filesystem::path csv;
  std::filesystem::path meta;
};

/// Header `k,residual,residual_times_k,gap,energy,variance`; missing values
/// stay empty. Numbers carry full precision so reruns are byte-comparable.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

/// Executes one configured run: builds the problem, dispatches the solver,
/// writes the trace CSV and a JSON sidecar echoing the full configuration
/// and seed next to it.
RunOutcome run_experiment(const Config& cfg);

/// Grid sweep over eta/alpha/sigma values on top of a base configuration.
/// Empty grids keep the base value. Runs fan out to `jobs` workers; each run
/// writes its own files under `out_dir`.
std::vector<RunOutcome> run_sweep(const Config& base, const std::vector<double>& etas,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& sigmas,
                                  const std::filesystem::path& out_dir, int jobs);

/// Dynamics run driven by the [dynamics] table; emits a trajectory CSV
/// `t,x0,...,v0,...,qnorm`.
RunOutcome run_dynamics(const Config& cfg);

/// Aggregates trace CSVs into figure-ready long format
/// `source,index,metric,value`.
void write_plotdata(const std::vector<std::filesystem::path>& inputs, std::ostream& out);

/// `lo:hi:count` or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

}  // namespace fastkm::bench
