#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bge/errors.hpp"

namespace bge {

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string claim;  // the mathematical statement the experiment verifies
};

struct ExperimentConfig {
  long max_cosets = 1L << 20;
};

struct ExperimentResult {
  std::string name;
  nlohmann::ordered_json inputs;
  nlohmann::ordered_json values;
  nlohmann::ordered_json expected;
  std::vector<std::string> failures;
  bool pass = false;
  double wall_ms = 0.0;
  std::string content_hash;  // over everything except the wall time

  nlohmann::ordered_json to_json() const;
};

std::vector<ExperimentInfo> list_experiments();

// Runs a registered experiment; unknown names raise contract_violation,
// resource exhaustion raises resource_error.
ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& cfg = {});

}  // namespace bge
