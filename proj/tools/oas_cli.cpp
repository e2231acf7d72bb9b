// oas: run oversampled adaptive sensing experiments and write CSV results.
//
//   oas run SPEC [--out FILE] [--plotdata FILE] [--timing] [--workers N]
//   oas sweep [SPEC] [--scenario NAME] [--rho LIST] [--m LIST] [--trials N]
//             [--seed S] [--out FILE] [--plotdata FILE]
//   oas validate SPEC
//
// Worker count: --workers, else the OAS_WORKERS environment variable, else
// the hardware concurrency.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "oas/errors.hpp"
#include "oas/experiment.hpp"
#include "oas/results_io.hpp"
#include "oas/spec_file.hpp"

namespace {

struct OutputArgs {
  std::string out = "-";
  std::string plotdata;
  bool timing = false;
  std::size_t workers = 0;
};

void add_output_options(CLI::App* cmd, OutputArgs& args) {
  cmd->add_option("-o,--out", args.out, "CSV output path ('-' for stdout)");
  cmd->add_option("--plotdata", args.plotdata, "Also write per-curve plot data to this path");
  cmd->add_flag("--timing", args.timing, "Record wall time per row (breaks byte-identical output)");
  cmd->add_option("-j,--workers", args.workers, "Worker threads (0 = automatic)");
}

int execute(oas::ExperimentSpec spec, const OutputArgs& args) {
  if (args.timing) spec.record_timing = true;
  if (args.workers > 0) spec.workers = args.workers;
  const auto rows = oas::run_experiment(spec);
  if (args.out == "-") {
    oas::write_csv(rows, std::cout);
  } else {
    oas::write_csv(rows, args.out);
  }
  if (!args.plotdata.empty()) {
    oas::write_plotdata(rows, args.plotdata);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oversampled adaptive sensing simulator"};
  app.require_subcommand(1);

  std::string run_spec;
  OutputArgs run_out;
  auto* run = app.add_subcommand("run", "Run the experiment described by a spec file");
  run->add_option("spec", run_spec, "Experiment spec file")->required()->check(CLI::ExistingFile);
  add_output_options(run, run_out);

  std::string sweep_spec;
  std::string sweep_scenario;
  std::vector<double> sweep_rho;
  std::vector<std::size_t> sweep_m;
  std::optional<std::size_t> sweep_trials;
  std::optional<std::uint64_t> sweep_seed;
  OutputArgs sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a sweep with inline overrides");
  sweep->add_option("spec", sweep_spec, "Optional base spec file")->check(CLI::ExistingFile);
  sweep->add_option("--scenario", sweep_scenario,
                    "Scenario defaults (fig1_decoupled, fig2_alg1, fig3_alg2, custom)");
  sweep->add_option("--rho", sweep_rho, "Inverse loads, comma separated")->delimiter(',');
  sweep->add_option("--m", sweep_m, "Subframe counts, comma separated")->delimiter(',');
  sweep->add_option("--trials", sweep_trials, "Monte Carlo trials");
  sweep->add_option("--seed", sweep_seed, "Master seed");
  add_output_options(sweep, sweep_out);

  std::string validate_spec;
  auto* validate = app.add_subcommand("validate", "Check a spec file without running it");
  validate->add_option("spec", validate_spec, "Experiment spec file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return execute(oas::load_spec_file(run_spec), run_out);
    }
    if (sweep->parsed()) {
      oas::ExperimentSpec spec;
      if (!sweep_spec.empty()) {
        spec = oas::load_spec_file(sweep_spec);
      } else {
        spec = oas::ExperimentSpec::defaults(oas::Scenario::Custom);
      }
      if (!sweep_scenario.empty()) {
        const auto base = oas::ExperimentSpec::defaults(oas::scenario_from_string(sweep_scenario));
        if (sweep_spec.empty()) {
          spec = base;
        } else {
          spec.scenario = base.scenario;
        }
      }
      if (!sweep_rho.empty()) spec.rho_list = sweep_rho;
      if (!sweep_m.empty()) spec.m_list = sweep_m;
      if (sweep_trials) spec.trials = *sweep_trials;
      if (sweep_seed) spec.master_seed = *sweep_seed;
      return execute(spec, sweep_out);
    }
    if (validate->parsed()) {
      const auto spec = oas::load_spec_file(validate_spec);
      spec.validate();
      std::cout << validate_spec << ": ok (" << oas::to_string(spec.scenario) << ", "
                << spec.rho_list.size() << " rho x " << spec.m_list.size() << " m x "
                << spec.trials << " trials)\n";
      return 0;
    }
  } catch (const oas::ConfigError& e) {
    std::cerr << "oas: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "oas: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
