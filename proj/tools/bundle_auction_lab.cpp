// bundle-auction-lab: config-driven driver for the bundling experiments.
//
//   bundle-auction-lab <subcommand> --config <path> [--out <path>] [--seed N] [--samples N]
//
// Exit status: 0 on success, 1 when a verify-* check fails (CSV is still
// written), 2 on configuration or runtime errors.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bundle_lab/experiment.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bundle auction lab: optimal pricing, bundle offers and revenue verification"};
  app.set_version_flag("--version", std::string(bundle_lab::library_version()));
  app.require_subcommand(1);

  Options opts;
  for (const char* name : {"single-opt", "pair-opt", "verify-thm1", "verify-thm2", "partition", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", opts.config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_path, "CSV output path (overrides config \"output\")");
    sub->add_option("--seed", opts.seed, "master seed (overrides config)");
    sub->add_option("--samples", opts.samples, "Monte Carlo samples (overrides config)")->check(CLI::PositiveNumber);
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    bundle_lab::ExperimentConfig config = bundle_lab::load_config(opts.config_path);
    const auto command = bundle_lab::parse_command(sub->get_name());
    if (command != config.command) {
      std::cerr << "config command '" << bundle_lab::to_string(config.command)
                << "' overridden by subcommand '" << sub->get_name() << "'\n";
      config.command = command;
    }
    if (sub->count("--out")) config.output = opts.out_path;
    if (sub->count("--seed")) config.seed = opts.seed;
    if (sub->count("--samples")) config.n_samples = opts.samples;

    const bundle_lab::RunReport report = bundle_lab::run(config);
    if (config.output.empty()) std::cout << bundle_lab::to_csv(report);
    std::cout << bundle_lab::report_footer(report);
    return report.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
