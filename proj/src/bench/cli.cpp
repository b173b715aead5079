#include "fastkm/bench/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fastkm/bench/config.hpp"
#include "fastkm/bench/runner.hpp"

namespace fastkm::bench {

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"fast fixed-point iteration benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "execute a single configured run");
  run_cmd->add_option("--config", config_path, "configuration file")->required();

  std::string sweep_config, eta_grid, alpha_grid, sigma_grid, sweep_out = "sweep_out";
  int jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over eta/alpha/sigma");
  sweep_cmd->add_option("--config", sweep_config, "base configuration file")->required();
  sweep_cmd->add_option("--eta", eta_grid, "grid lo:hi:count or comma list");
  sweep_cmd->add_option("--alpha", alpha_grid, "grid lo:hi:count or comma list");
  sweep_cmd->add_option("--sigma", sigma_grid, "grid lo:hi:count or comma list");
  sweep_cmd->add_option("--out", sweep_out, "output directory");
  sweep_cmd->add_option("--jobs", jobs, "worker count");

  std::string dyn_config;
  auto* dyn_cmd = app.add_subcommand("dynamics", "integrate the continuous-time model");
  dyn_cmd->add_option("--config", dyn_config, "configuration file")->required();

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plotdata", "aggregate trace CSVs into long format");
  plot_cmd->add_option("inputs", plot_inputs, "trace CSV files")->required();
  plot_cmd->add_option("--out", plot_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      const auto outcome = run_experiment(Config::parse_file(config_path));
      std::cout << "wrote " << outcome.csv.string() << '\n';
    } else if (sweep_cmd->parsed()) {
      const auto outcomes = run_sweep(Config::parse_file(sweep_config), parse_grid(eta_grid),
                                      parse_grid(alpha_grid), parse_grid(sigma_grid), sweep_out, jobs);
      std::cout << "wrote " << outcomes.size() << " traces under " << sweep_out << '\n';
    } else if (dyn_cmd->parsed()) {
      const auto outcome = run_dynamics(Config::parse_file(dyn_config));
      std::cout << "wrote " << outcome.csv.string() << '\n';
    } else if (plot_cmd->parsed()) {
      std::vector<std::filesystem::path> inputs(plot_inputs.begin(), plot_inputs.end());
      std::ofstream out(plot_out);
      if (!out) throw std::runtime_error("cannot write output file: " + plot_out);
      write_plotdata(inputs, out);
      std::cout << "wrote " << plot_out << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace fastkm::bench
