// landau_lab: scenario runner for the Landau damping laboratory.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "landau/config.hpp"
#include "landau/scenario.hpp"

namespace {

struct FlagMap {
  const char* flag;
  const char* key;
  const char* help;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landau damping laboratory: Penrose scans, linear theory, kinetic runs and generator diagnostics"};
  app.fallthrough();
  std::string config_path, out_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "key = value run configuration");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.require_subcommand(1, 1);

  landau::harness::RawConfig overrides;
  std::string scenario;
  auto add = [&](const std::string& name, const std::string& help, std::vector<FlagMap> flags) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&scenario, name] { scenario = name; });
    for (const auto& f : flags) {
      const std::string key = f.key;
      sub->add_option_function<std::string>(
          f.flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, f.help);
    }
  };
  add("penrose", "scan |D| on the imaginary axis",
      {{"--alpha", "penrose_alpha", "perturbation parameter of the dispersion functional"},
       {"--k-max", "penrose_k_max", "largest |k| scanned"},
       {"--im-max", "penrose_im_max", "|Im lambda| scan limit"},
       {"--step", "penrose_step", "Im lambda spacing"},
       {"--tol", "penrose_tol", "quadrature tolerance"}});
  add("linear", "solve the linearized density equations",
      {{"--epsilon", "epsilon", "mass ratio"},
       {"--theta1", "theta1", "contour offset, 0 < theta1 < theta0"},
       {"--dt", "linear_dt", "time step"},
       {"--tmax", "linear_t_max", "final time"},
       {"--k-max", "linear_k_max", "largest seeded mode"},
       {"--method", "linear_method", "volterra | resolvent | both"}});
  add("kernel", "resolvent kernel by inverse Laplace transform",
      {{"--epsilon", "epsilon", "mass ratio"},
       {"--theta1", "theta1", "contour offset"},
       {"--dt", "linear_dt", "time step"},
       {"--tmax", "linear_t_max", "final time"},
       {"--k-max", "linear_k_max", "largest mode"}});
  add("nonlinear", "two-species kinetic run with generator diagnostics",
      {{"--epsilon", "epsilon", "mass ratio"},
       {"--amp", "amp", "seed amplitude"},
       {"--dt", "sim_dt", "time step"},
       {"--tmax", "sim_t_max", "final time"},
       {"--nx", "n_x", "spatial grid points per dimension"},
       {"--nv", "n_v", "velocity points per dimension"},
       {"--vmax", "v_max", "velocity box half-width"},
       {"--snap-every", "snap_every", "steps between snapshots"}});
  add("full-report", "penrose, linear, kernel and nonlinear in sequence", {});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    landau::harness::RawConfig raw;
    if (!config_path.empty()) raw = landau::harness::read_config_file(config_path);
    raw.emplace_back("scenario", scenario);
    for (auto& kv : overrides) raw.push_back(kv);
    if (!out_dir.empty()) raw.emplace_back("output_dir", out_dir);
    const auto cfg = landau::harness::resolve_config(raw);

    landau::harness::Log log;
    if (!quiet) log = [](const std::string& s) { std::cout << s << '\n'; };
    const auto m = landau::harness::run_scenario(cfg, log);
    if (!quiet) std::cout << "manifest: " << cfg.output_dir << "/manifest.json (" << m.config_hash << ")\n";
    return 0;
  } catch (const landau::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const landau::InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
