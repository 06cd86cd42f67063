#pragma once

#include "json.hpp"

#include <cstdint>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <vector>

namespace affwalk {

inline constexpr const char* kToolVersion = "affine-walk-lab 1.0.0";

/// One experiment run: which experiment, its parameters, and how to run it.
/// Only `experiment`, `seed` and `params` enter the config hash, so outputs do
/// not depend on the worker count or output location.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string output_dir = "out";
  nlohmann::json params = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const ExperimentConfig& cfg);
void from_json(const nlohmann::json& j, ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);

/// Hex FNV-1a 64 of the canonical JSON of (experiment, seed, params).
std::string config_hash(const ExperimentConfig& cfg);

/// Invalid configuration; what() lists every violated precondition.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(std::vector<std::string> violations);
  [[nodiscard]] const std::vector<std::string>& violations() const { return violations_; }

private:
  std::vector<std::string> violations_;
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct ExperimentOutput {
  std::vector<OutputFile> files;
  bool success = true;  // false when an acceptance run has failing criteria
};

std::vector<std::string> experiment_names();

/// Runs the named experiment. Identical configs give byte-identical output.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::stop_token stop = {});

/// Writes every file under cfg.output_dir, creating it if needed.
void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out);

}  // namespace affwalk
