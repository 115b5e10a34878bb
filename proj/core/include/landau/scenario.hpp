#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "landau/config.hpp"

namespace landau::harness {

const char* version();

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
};

struct RunManifest {
  std::string scenario;
  std::string config_hash;
  std::string version;
  std::string started;
  std::string finished;
  std::vector<std::string> files;  ///< relative to the output directory, emission order
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Check> checks;

  void set_metric(const std::string& name, double value);
  std::optional<double> metric(const std::string& name) const;
  bool all_passed() const;
};

std::string manifest_json(const RunManifest& m);

using Log = std::function<void(const std::string&)>;

/// Runs cfg.scenario into cfg.output_dir and writes manifest.json last.
/// Module errors propagate with the scenario name prefixed; a failed
/// cross-check raises InvariantBreach after the manifest is written.
RunManifest run_scenario(const RunConfig& cfg, const Log& log = {});

}  // namespace landau::harness
