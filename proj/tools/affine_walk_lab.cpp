#include <csignal>
#include <iostream>
#include <stop_token>
#include <thread>

#include "CLI11.hpp"
#include "affwalk/experiment.hpp"

namespace {

std::stop_source g_stop;

extern "C" void on_signal(int) { g_stop.request_stop(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on Aff(R): heat kernel, return probabilities and limit theorems"};
  app.set_version_flag("--version", affwalk::kToolVersion);

  std::string experiment;
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string out_dir;
  bool list = false;

  app.add_option("experiment", experiment, "experiment name (see --list)");
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override the master seed");
  app.add_option("--workers", workers, "override the worker count")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "override the output directory");
  app.add_flag("--list", list, "list experiments and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : affwalk::experiment_names()) {
      std::cout << name << '\n';
    }
    return 0;
  }
  if (experiment.empty()) {
    std::cerr << "an experiment name is required (try --list)\n";
    return 2;
  }

  try {
    affwalk::ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = affwalk::load_config(config_path);
      if (cfg.experiment != experiment) {
        std::cerr << "config is for experiment '" << cfg.experiment << "', not '" << experiment
                  << "'\n";
        return 2;
      }
    } else {
      cfg.experiment = experiment;
    }
    if (app.count("--seed") > 0) {
      cfg.seed = seed;
    }
    if (app.count("--workers") > 0) {
      cfg.workers = workers;
    }
    if (app.count("--out") > 0) {
      cfg.output_dir = out_dir;
    }
    if (cfg.workers == 0) {
      cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    }

    std::signal(SIGINT, on_signal);
    const auto output = affwalk::run_experiment(cfg, g_stop.get_token());
    affwalk::write_outputs(cfg, output);
    for (const auto& f : output.files) {
      std::cout << "wrote " << cfg.output_dir << '/' << f.name << '\n';
      if (f.name == "acceptance.txt") {
        std::cout << f.content;
      }
    }
    return output.success ? 0 : 1;
  } catch (const affwalk::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
