#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "landau/config.hpp"
#include "landau/csv.hpp"
#include "landau/scenario.hpp"

using namespace landau;
using namespace landau::harness;
namespace fs = std::filesystem;

namespace {

bool mentions(const ConfigError& e, const std::string& what) {
  for (const auto& p : e.problems())
    if (p.find(what) != std::string::npos) return true;
  return false;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("landau_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ConfigParse, CommentsAndQuotes) {
  const auto raw = parse_config_text("# header\nscenario = penrose\nequilibrium = \"gaussian\"  # trailing\n\n  dim=1\n");
  ASSERT_EQ(raw.size(), 3u);
  EXPECT_EQ(raw[0], (std::pair<std::string, std::string>{"scenario", "penrose"}));
  EXPECT_EQ(raw[1].second, "gaussian");
  EXPECT_EQ(raw[2].first, "dim");
}

TEST(ConfigParse, MalformedLinesItemized) {
  try {
    parse_config_text("good = 1\nno equals sign\n= 3\nx = \"open\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.problems().size(), 3u);
  }
}

TEST(ConfigResolve, Defaults) {
  const auto c = resolve_config({});
  EXPECT_EQ(c.scenario, Scenario::full_report);
  EXPECT_DOUBLE_EQ(c.gevrey.lambda0, 0.05);
  EXPECT_DOUBLE_EQ(c.gevrey.delta, 0.5);
  EXPECT_DOUBLE_EQ(c.gevrey.sigma, 4.0);
  EXPECT_DOUBLE_EQ(c.gevrey.alpha, 0.2);
  EXPECT_DOUBLE_EQ(c.gevrey.gamma, 1.0);
  EXPECT_DOUBLE_EQ(c.theta1, 0.25);
  EXPECT_EQ(c.nonlinear.sim.n_x, 16);
  EXPECT_EQ(c.nonlinear.sim.n_v, 512);
  EXPECT_FALSE(c.resolved.empty());
}

TEST(ConfigResolve, SigmaTooSmall) {
  try {
    resolve_config({{"sigma", "2"}, {"dim", "1"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e, "sigma must exceed max{d+1,3}=3"));
  }
}

TEST(ConfigResolve, ThetaOrderItemized) {
  try {
    resolve_config({{"theta1", "0.7"}, {"alpha", "0.9"}, {"bogus_key", "1"}, {"n_x", "many"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_TRUE(mentions(e, "theta1"));
    EXPECT_TRUE(mentions(e, "alpha"));
    EXPECT_TRUE(mentions(e, "bogus_key"));
    EXPECT_TRUE(mentions(e, "n_x"));
    EXPECT_GE(e.problems().size(), 4u);
  }
}

TEST(ConfigResolve, LaterEntryWins) {
  const auto c = resolve_config({{"epsilon", "0.02"}, {"epsilon", "0.03"}});
  EXPECT_DOUBLE_EQ(c.epsilon, 0.03);
  EXPECT_DOUBLE_EQ(c.nonlinear.sim.epsilon, 0.03);
}

TEST(ConfigFile, LoadAndMissing) {
  const auto dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "scenario = linear\nlinear_dt = 0.02\n";
  const auto c = load_config(dir / "run.cfg");
  EXPECT_EQ(c.scenario, Scenario::linear);
  EXPECT_DOUBLE_EQ(c.linear.dt, 0.02);
  EXPECT_THROW(load_config(dir / "absent.cfg"), Error);
  fs::remove_all(dir);
}

TEST(ConfigHash, IgnoresOutputDirOnly) {
  const auto a = config_hash(resolve_config({{"output_dir", "x"}}));
  const auto b = config_hash(resolve_config({{"output_dir", "y"}}));
  const auto c = config_hash(resolve_config({{"epsilon", "0.02"}}));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a.size(), 16u);
}

TEST(ConfigKeys, Documented) {
  const auto keys = known_keys();
  for (const char* k : {"scenario", "equilibrium", "h1_grid_radius", "h1_grid_step", "gamma", "sigma", "alpha",
                        "lambda0", "delta", "lambda1", "z_eval", "n_x", "n_v", "output_dir"})
    EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}

TEST(Csv, FormatAndWidth) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  {
    CsvWriter w(dir / "a.csv", {"t", "k", "name"});
    w.row({0.5, 3LL, std::string("x")});
    EXPECT_THROW(w.row({1.0}), Error);
    w.close();
  }
  EXPECT_EQ(slurp(dir / "a.csv"), "t,k,name\n0.5,3,x\n");
  fs::remove_all(dir);
}

TEST(Manifest, JsonShape) {
  RunManifest m;
  m.scenario = "penrose";
  m.config_hash = "0123456789abcdef";
  m.version = version();
  m.files = {"a.csv"};
  m.set_metric("x", 1.5);
  m.set_metric("x", 2.5);
  m.set_metric("bad", std::numeric_limits<double>::infinity());
  m.checks.push_back({"c", true, 1.0, 2.0});
  EXPECT_EQ(*m.metric("x"), 2.5);
  EXPECT_FALSE(m.metric("y").has_value());
  EXPECT_TRUE(m.all_passed());
  const auto j = nlohmann::json::parse(manifest_json(m));
  EXPECT_EQ(j["scenario"], "penrose");
  EXPECT_EQ(j["metrics"]["x"], 2.5);
  EXPECT_TRUE(j["metrics"]["bad"].is_string());
  EXPECT_EQ(j["files"][0], "a.csv");
}

TEST(Scenario, PenroseRecordsInfimum) {
  auto cfg = resolve_config({{"scenario", "penrose"}});
  cfg.output_dir = scratch("penrose").string();
  const auto m = run_scenario(cfg);
  EXPECT_NEAR(*m.metric("penrose_inf_modulus"), 0.75095688244110403, 1e-9);
  EXPECT_TRUE(m.all_passed());
  for (const auto& f : m.files) EXPECT_TRUE(fs::exists(fs::path(cfg.output_dir) / f)) << f;
  std::size_t on_disk = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(cfg.output_dir)) ++on_disk;
  EXPECT_EQ(on_disk, m.files.size());
  fs::remove_all(cfg.output_dir);
}

TEST(Scenario, LinearEpsilonZeroIdentity) {
  auto cfg = resolve_config({{"scenario", "linear"}, {"epsilon", "0"}, {"linear_method", "volterra"},
                             {"linear_t_max", "5"}, {"linear_dt", "0.02"}});
  cfg.output_dir = scratch("linear0").string();
  const auto m = run_scenario(cfg);
  const auto it = std::find_if(m.checks.begin(), m.checks.end(),
                               [](const Check& c) { return c.name == "rho_plus equals S_plus (epsilon=0 identity)"; });
  ASSERT_NE(it, m.checks.end());
  EXPECT_TRUE(it->passed);
  fs::remove_all(cfg.output_dir);
}

TEST(Scenario, NonlinearDeterministic) {
  const RawConfig raw{{"scenario", "nonlinear"}, {"sim_t_max", "2"}, {"n_v", "256"}, {"snap_every", "5"},
                      {"checkpoint_every", "20"}};
  auto a = resolve_config(raw), b = resolve_config(raw);
  a.output_dir = scratch("det_a").string();
  b.output_dir = scratch("det_b").string();
  const auto ma = run_scenario(a);
  run_scenario(b);
  EXPECT_NE(std::find(ma.files.begin(), ma.files.end(), "checkpoint_000020.bin"), ma.files.end());
  for (const auto& f : ma.files) {
    if (f.ends_with(".csv") || f.ends_with(".bin"))
      EXPECT_EQ(slurp(fs::path(a.output_dir) / f), slurp(fs::path(b.output_dir) / f)) << f;
  }
  EXPECT_EQ(ma.files.back(), "manifest.json");
  fs::remove_all(a.output_dir);
  fs::remove_all(b.output_dir);
}

TEST(Scenario, ModuleBreachPropagates) {
  auto cfg = resolve_config({{"scenario", "nonlinear"}, {"sim_t_max", "1"}, {"boundary_tol", "1e-30"}});
  cfg.output_dir = scratch("breach").string();
  EXPECT_THROW(run_scenario(cfg), InvariantBreach);
  fs::remove_all(cfg.output_dir);
}
