#pragma once

// Experiment front end shared by the confgas executable and its tests.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace confgas::cli {

using json = nlohmann::json;

struct ExperimentConfig {
  std::string command;
  json params;  ///< command parameters, defaults filled in
  std::uint64_t seed = 20240601;
  std::string out;      ///< CSV/JSON destination; empty means stdout
  std::string summary;  ///< maxmod summary destination; empty means <out>.json or stderr
  std::map<std::string, double> tolerances;
};

/// Layers defaults, then `file` (parsed config), then `overrides` (flags).
/// Unknown keys, wrong types and unknown tolerance names raise ValidationError.
ExperimentConfig make_config(const std::string& command, const json& file, const json& overrides);

struct Check {
  std::string name;
  bool passed;
  std::string detail;
};

struct Outcome {
  std::string primary;  ///< CSV text, or the JSON report for `ward`
  json summary;         ///< only for `maxmod`
  std::vector<Check> checks;
  bool ok() const;
};

Outcome run(const ExperimentConfig& cfg);

const std::vector<std::string>& command_names();

}  // namespace confgas::cli
