#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "landau/equilibria.hpp"
#include "landau/generators.hpp"
#include "landau/kinetic_sim.hpp"
#include "landau/linear_theory.hpp"
#include "landau/penrose.hpp"

namespace landau::harness {

enum class Scenario { penrose, linear, nonlinear, kernel, full_report };
enum class LinearMethod { volterra, resolvent, both };

std::string to_string(Scenario s);
std::string to_string(LinearMethod m);

struct LinearBlock {
  double dt = 0.01;
  double t_max = 20.0;
  int k_max = 2;
  LinearMethod method = LinearMethod::both;
  double amp = 1e-3;
  linear::KernelOptions kernel;
};

struct NonlinearBlock {
  kinetic::SimConfig sim;
  int seed_k = 1;
  kinetic::Species seed_species = kinetic::Species::plus;
  int snap_every = 10;
  int checkpoint_every = 0;  ///< 0: final state only
};

/// Fully resolved run configuration. Defaults are those of the documented
/// key table; `resolved` keeps the canonical key = value listing.
struct RunConfig {
  Scenario scenario = Scenario::full_report;
  std::string equilibrium = "gaussian";
  int dim = 1;
  double epsilon = 0.01;
  double theta0 = equilibria::kDefaultTheta0;
  double theta1 = 0.25;
  equilibria::CertGrid h1_grid;
  penrose::ScanOptions penrose;
  bool kappa0_given = false;
  LinearBlock linear;
  NonlinearBlock nonlinear;
  generators::GevreyParams gevrey;
  double z_eval = 0.05;
  std::string output_dir = "out";
  std::vector<std::pair<std::string, std::string>> resolved;
};

/// Ordered key/value pairs; a later entry overrides an earlier one.
using RawConfig = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines. '#' starts a comment outside quotes; values
/// may be double-quoted. Throws ConfigError listing every malformed line.
RawConfig parse_config_text(std::string_view text);
RawConfig read_config_file(const std::filesystem::path& path);

/// Applies defaults, parses values and checks cross-field constraints.
/// Throws ConfigError with one entry per unknown key, bad value or
/// violated constraint.
RunConfig resolve_config(const RawConfig& raw);

RunConfig load_config(const std::filesystem::path& path);

/// Names of all accepted keys, in documentation order.
std::vector<std::string> known_keys();

/// FNV-1a 64 of the canonical listing, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Equilibrium by name with c_mu certified at cfg.theta0 on cfg.h1_grid.
/// Throws DomainError when the certificate fails.
equilibria::Equilibrium make_equilibrium(const RunConfig& cfg);

}  // namespace landau::harness
