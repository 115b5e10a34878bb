#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "landau/config.hpp"
#include "landau/equilibria.hpp"
#include "landau/generators.hpp"
#include "landau/kinetic_sim.hpp"
#include "landau/linear_theory.hpp"
#include "landau/penrose.hpp"
#include "landau/scenario.hpp"

namespace fs = std::filesystem;
using namespace landau;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();

const fs::path& scratch_root() {
  static const fs::path root = fs::temp_directory_path() / "landau_acceptance";
  return root;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

// Scenario run whose metrics stay readable when a built-in check fails.
struct Run {
  harness::RunManifest m;
  fs::path dir;
  std::string error;

  double metric(const std::string& name) const { return m.metric(name).value_or(kNaN); }
  bool check_passed(const std::string& name) const {
    for (const auto& c : m.checks)
      if (c.name == name) return c.passed;
    return false;
  }
};

harness::RunManifest read_manifest(const fs::path& dir) {
  std::ifstream is(dir / "manifest.json");
  const auto j = nlohmann::json::parse(is);
  harness::RunManifest m;
  m.scenario = j.at("scenario").get<std::string>();
  for (const auto& f : j.at("files")) m.files.push_back(f.get<std::string>());
  for (const auto& [k, v] : j.at("metrics").items()) m.metrics.emplace_back(k, v.is_number() ? v.get<double>() : kNaN);
  for (const auto& c : j.at("checks"))
    m.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                        c.at("value").is_number() ? c.at("value").get<double>() : kNaN,
                        c.at("limit").is_number() ? c.at("limit").get<double>() : kNaN});
  return m;
}

Run run(harness::RawConfig raw, const std::string& name) {
  Run r;
  r.dir = scratch_root() / name;
  fs::remove_all(r.dir);
  raw.emplace_back("output_dir", r.dir.string());
  try {
    r.m = harness::run_scenario(harness::resolve_config(raw));
  } catch (const InvariantBreach& e) {
    r.error = e.what();
    if (fs::exists(r.dir / "manifest.json")) r.m = read_manifest(r.dir);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

double rel_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const equilibria::Equilibrium& gauss() {
  static const auto eq = equilibria::gaussian_equilibrium(1);
  return eq;
}

// Shared runs, computed on first use.
const Run& linear_run(double dt) {
  static std::map<double, Run> cache;
  if (auto it = cache.find(dt); it != cache.end()) return it->second;
  return cache[dt] = run({{"scenario", "linear"}, {"linear_method", "both"}, {"linear_t_max", "20"}, {"linear_k_max", "2"},
                          {"epsilon", "0.01"}, {"linear_dt", fmt(dt)}},
                         "linear_dt" + fmt(dt));
}

enum class Nl { base, half_dt, fine_v, l41, l41_half_dt };

// base: linear-regime run (amp 1e-6); l41: the harness default amplitude.
const Run& nonlinear_run(Nl which) {
  static std::map<Nl, Run> cache;
  if (auto it = cache.find(which); it != cache.end()) return it->second;
  const bool small = which == Nl::l41 || which == Nl::l41_half_dt;
  harness::RawConfig raw{{"scenario", "nonlinear"}, {"amp", small ? "1e-3" : "1e-6"}, {"epsilon", "0.01"},
                         {"seed_k", "1"},           {"sim_t_max", "20"},                {"n_x", "16"},
                         {"n_v", "512"},            {"sim_dt", "0.05"}};
  if (which == Nl::half_dt || which == Nl::l41_half_dt) {
    raw.emplace_back("sim_dt", "0.025");
    raw.emplace_back("snap_every", "20");
  }
  if (which == Nl::fine_v) raw.emplace_back("n_v", "1024");
  return cache[which] = run(raw, "nonlinear_" + std::to_string(static_cast<int>(which)));
}

Verdict criterion1() {
  Verdict v;
  Stopwatch sw;
  double worst = 0.0;
  for (int k : {1, 2, 3}) {
    const cplx d = penrose::dispersion(gauss(), {{k, 0}, 0.0, 0.0});
    worst = std::max(worst, std::abs(d - (1.0 + 1.0 / (k * k))));
  }
  const double secs = sw.seconds();
  v.require(worst <= 1e-9, "max |D(0,k)-(1+1/k^2)| = " + fmt(worst) + " <= 1e-9");
  v.require(secs < 1.0, "runtime " + fmt(secs) + " s < 1 s");
  return v;
}

Verdict criterion2() {
  Verdict v;
  Stopwatch sw;
  penrose::ScanOptions base;
  base.k_max = 8;
  base.im_max = 60.0;
  const auto r0 = penrose::penrose_infimum(gauss(), base);
  auto pert = base;
  pert.alpha = 0.05;
  const auto r1 = penrose::penrose_infimum(gauss(), pert);
  const double secs = sw.seconds();
  const double shift = std::abs(r1.inf_modulus - r0.inf_modulus);
  const double bound = 0.05 * gauss().c_mu / (gauss().theta0 * gauss().theta0);
  v.require(r0.inf_modulus >= 1.0 - 1e-6, "inf |D| = " + fmt(r0.inf_modulus) + " >= 1-1e-6");
  v.require(shift <= bound, "eps=0.05 shift " + fmt(shift) + " <= " + fmt(bound));
  v.require(secs < 30.0, "runtime " + fmt(secs) + " s < 30 s");
  return v;
}

Verdict criterion3() {
  Verdict v;
  Stopwatch sw;
  const auto& a = linear_run(0.01);
  const double secs = sw.seconds();
  const auto& b = linear_run(0.005);
  if (!a.error.empty()) v.require(false, "dt=0.01 run: " + a.error);
  if (!b.error.empty()) v.require(false, "dt=0.005 run: " + b.error);
  const double ea = a.metric("linear_two_path_rel_error"), eb = b.metric("linear_two_path_rel_error");
  const double ratio = ea / eb;
  v.require(ea <= 1e-3, "rel L_inf gap " + fmt(ea) + " <= 1e-3 at dt=0.01");
  v.require(ratio >= 3.0 && ratio <= 5.0, "halving ratio " + fmt(ratio) + " in [3,5]");
  v.require(secs < 60.0, "runtime " + fmt(secs) + " s < 60 s");
  return v;
}

Verdict criterion4() {
  Verdict v;
  Stopwatch sw;
  const double theta1 = gauss().theta0 / 2.0;
  const auto grid = TimeGrid::covering(0.01, 20.0);
  const auto ker = linear::kernel_inverse_laplace(gauss(), 0.01, {1, 0}, theta1, grid);
  double worst = 0.0;
  for (double im : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const cplx lam(1.0, im);
    const cplx want = linear::resolvent_symbol(gauss(), 0.01, {1, 0}, lam);
    worst = std::max(worst, std::abs(linear::forward_laplace(ker, lam) - want) / std::abs(want));
  }
  const double secs = sw.seconds();
  v.require(ker.fit_theta >= theta1, "fitted decay " + fmt(ker.fit_theta) + " >= theta1 " + fmt(theta1));
  v.require(worst <= 1e-5, "forward Laplace rel error " + fmt(worst) + " <= 1e-5");
  v.require(secs < 60.0, "runtime " + fmt(secs) + " s < 60 s");
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto grid = TimeGrid::covering(0.01, 20.0);
  const kinetic::SeedSpec seed{{{1, 0}, 1e-3, 0.0, kinetic::Species::plus, {}},
                               {{2, 0}, 4e-4, 0.7, kinetic::Species::plus, {0.9, {0.3, 0.0}}},
                               {{1, 0}, 6e-4, 1.1, kinetic::Species::minus, {}}};
  const std::vector<Mode> modes{{1, 0}, {2, 0}};
  const auto src = linear::build_source(kinetic::seed_spectrum(seed, kinetic::Species::plus, 1),
                                        kinetic::seed_spectrum(seed, kinetic::Species::minus, 1), grid, modes, 1);
  const auto vol = linear::solve_volterra(src, gauss(), 0.0);
  std::vector<linear::KernelSeries> kernels;
  for (const Mode& k : modes) kernels.push_back(linear::kernel_inverse_laplace(gauss(), 0.0, k, 0.25, grid));
  const auto res = linear::reconstruct_rho(src, kernels, 0.0);
  double top = 0.0, gap_v = 0.0, gap_r = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t n = 0; n < grid.size(); ++n) {
      top = std::max(top, std::abs(src.s_plus[i][n]));
      gap_v = std::max(gap_v, std::abs(vol.rho_plus[i][n] - src.s_plus[i][n]));
      gap_r = std::max(gap_r, std::abs(res.rho_plus[i][n] - src.s_plus[i][n]));
    }
  const double lim = 4.0 * kEps * top;
  v.require(gap_v <= lim, "Volterra max|rho+ - S+| = " + fmt(gap_v) + " <= " + fmt(lim));
  v.require(gap_r <= lim, "resolvent max|rho+ - S+| = " + fmt(gap_r) + " <= " + fmt(lim));
  return v;
}

Verdict criterion6() {
  Verdict v;
  const auto& r = nonlinear_run(Nl::base);
  if (!r.error.empty()) v.require(false, "run: " + r.error);
  const double e = r.metric("frame_identity_rel_error");
  v.require(e <= 1e-8, "max |g(t,k,kt) - rho(t,k)| / max|rho| = " + fmt(e) + " <= 1e-8");
  return v;
}

Verdict criterion7() {
  Verdict v;
  kinetic::SimConfig cfg;
  cfg.n_x = 16;
  cfg.n_v = 512;
  cfg.dt = 0.1;
  cfg.t_max = 20.0;
  cfg.zero_field = true;
  kinetic::Solver s(cfg, gauss());
  const kinetic::SeedSpec seed{{{1, 0}, 1e-3, 0.3, kinetic::Species::plus, {}},
                               {{2, 0}, 5e-4, 0.0, kinetic::Species::plus, {}},
                               {{1, 0}, 8e-4, -0.4, kinetic::Species::minus, {0.8, {0.5, 0.0}}}};
  auto st = s.init_state(seed, {}).state;
  const auto& modes = s.lattice().modes();
  const kinetic::Species species[2] = {kinetic::Species::plus, kinetic::Species::minus};
  linear::SpectrumFn oracle[2] = {kinetic::seed_spectrum(seed, species[0], 1), kinetic::seed_spectrum(seed, species[1], 1)};
  double err = 0.0, top = 0.0;
  const auto steps = std::lround(cfg.t_max / cfg.dt);
  for (long n = 0;; ++n) {
    for (int j = 0; j < 2; ++j) {
      const auto rho = s.density(st, species[j]);
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const cplx want = oracle[j](modes[i], {modes[i][0] * st.t, 0.0});
        top = std::max(top, std::abs(want));
        err = std::max(err, std::abs(rho[i] - want));
      }
    }
    if (n == steps) break;
    s.step(st);
  }
  const double rel = err / top;
  v.require(st.t >= 20.0 - 1e-9, "reached t = " + fmt(st.t));
  v.require(rel <= 1e-8, "max |rho(t,k) - f0(k,kt)| / max|f0| = " + fmt(rel) + " <= 1e-8");
  return v;
}

Verdict criterion8() {
  Verdict v;
  Stopwatch sw;
  kinetic::SimConfig cfg;
  cfg.n_x = 32;
  cfg.n_v = 256;
  cfg.dt = 0.05;
  cfg.t_max = 40.0;
  kinetic::Solver s(cfg, gauss());
  const kinetic::SeedSpec seed{{{1, 0}, 1e-3, 0.0, kinetic::Species::plus, {}},
                               {{2, 0}, 1e-3, 0.5, kinetic::Species::minus, {}}};
  auto st = s.init_state(seed, {}).state;
  const auto d0 = s.diagnostics(st);
  double drift = 0.0, neutral = d0.neutrality;
  const auto steps = std::lround(cfg.t_max / cfg.dt);
  for (long n = 0; n < steps; ++n) {
    s.step(st);
    const auto d = s.diagnostics(st);
    drift = std::max({drift, std::abs(d.mass_plus - d0.mass_plus) / st.t, std::abs(d.mass_minus - d0.mass_minus) / st.t});
    neutral = std::max(neutral, d.neutrality);
  }
  const double secs = sw.seconds();
  v.require(drift <= 1e-10, "mass drift per unit time " + fmt(drift) + " <= 1e-10");
  v.require(neutral <= 1e-12, "max |rho(t,0)| = " + fmt(neutral) + " <= 1e-12");
  v.require(secs < 300.0, "runtime " + fmt(secs) + " s < 300 s");
  return v;
}

Verdict criterion9() {
  Verdict v;
  const auto& a = nonlinear_run(Nl::base);
  const auto& b = nonlinear_run(Nl::half_dt);
  if (!a.error.empty()) v.require(false, "dt=0.05 run: " + a.error);
  if (!b.error.empty()) v.require(false, "dt=0.025 run: " + b.error);
  const double la = a.metric("nonlinear_decay_rate"), lb = b.metric("nonlinear_decay_rate");
  const double r2 = a.metric("nonlinear_decay_r2");
  v.require(la > 0.0, "lambda_fit = " + fmt(la) + " > 0");
  v.require(r2 >= 0.95, "r2 = " + fmt(r2) + " >= 0.95");
  v.require(rel_change(la, lb) <= 0.1, "dt halving change " + fmt(rel_change(la, lb)) + " <= 0.1");
  const double amp = 1e-6;
  const double gap = a.metric("nonlinear_linear_gap_abs");
  const double lim = 10.0 * amp * amp + 1e-3 * a.metric("linear_reference_rho_max");
  v.require(gap <= lim, "|rho_sim - rho_Volterra| = " + fmt(gap) + " <= " + fmt(lim));
  return v;
}

Verdict criterion10() {
  Verdict v;
  std::mt19937_64 rng(20260101);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto integer = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    generators::GevreyParams p;
    p.dim = integer(1, 2);
    const double z = uni(0.0, 1.0);
    const Mode k{integer(-30, 30), p.dim == 2 ? integer(-30, 30) : 0};
    const Mode kp{integer(-30, 30), p.dim == 2 ? integer(-30, 30) : 0};
    const RVec e{uni(-80.0, 80.0), p.dim == 2 ? uni(-80.0, 80.0) : 0.0};
    const RVec ep{uni(-80.0, 80.0), p.dim == 2 ? uni(-80.0, 80.0) : 0.0};
    const double lhs = generators::log_weight(k, e, z, p);
    const double rhs = p.sigma * std::log(2.0) + generators::log_weight(kp, ep, z, p) +
                       generators::log_weight({k[0] - kp[0], k[1] - kp[1]}, {e[0] - ep[0], e[1] - ep[1]}, z, p);
    if (lhs > rhs + 1e-12 * std::abs(rhs)) ++bad;
  }
  v.require(bad == 0, "(a) submultiplicativity violations " + std::to_string(bad) + "/10000");

  const auto& a = nonlinear_run(Nl::base);
  const auto& b = nonlinear_run(Nl::half_dt);
  const auto& c = nonlinear_run(Nl::fine_v);
  for (const auto* r : {&a, &b, &c})
    if (!r->error.empty()) v.require(false, "nonlinear run: " + r->error);
  const double c0a = a.metric("max_c0_est"), c0c = c.metric("max_c0_est");
  v.require(std::isfinite(c0a) && rel_change(c0a, c0c) < 0.2,
            "(b) c0 = " + fmt(c0a) + ", n_v refinement change " + fmt(rel_change(c0a, c0c)) + " < 0.2");
  const bool mono = a.check_passed("F monotone in z") && b.check_passed("F monotone in z") &&
                    c.check_passed("F monotone in z");
  v.require(mono, "(c) F monotone in z on every snapshot");

  const auto& la = linear_run(0.01);
  const auto& lb = linear_run(0.005);
  const double ca = la.metric("linear_gevrey_c_fit"), cb = lb.metric("linear_gevrey_c_fit");
  v.require(std::isfinite(ca) && rel_change(ca, cb) < 0.2,
            "(d) linear C = " + fmt(ca) + ", dt halving change " + fmt(rel_change(ca, cb)) + " < 0.2");

  const auto& sa = nonlinear_run(Nl::l41);
  const auto& sb = nonlinear_run(Nl::l41_half_dt);
  for (const auto* r : {&sa, &sb})
    if (!r->error.empty()) v.require(false, "amp=1e-3 run: " + r->error);
  const double ga = sa.metric("g_evolution_c_min"), gb = sb.metric("g_evolution_c_min");
  v.require(std::isfinite(ga) && rel_change(ga, gb) < 0.2,
            "(e) G-evolution C = " + fmt(ga) + ", dt halving change " + fmt(rel_change(ga, gb)) + " < 0.2");
  return v;
}

Verdict criterion11() {
  Verdict v;
  const auto a = run({{"scenario", "full-report"}}, "full_a");
  const auto b = run({{"scenario", "full-report"}}, "full_b");
  if (!a.error.empty()) v.require(false, "first run: " + a.error);
  if (!b.error.empty()) v.require(false, "second run: " + b.error);
  std::vector<std::string> csvs;
  for (const auto& f : a.m.files)
    if (f.ends_with(".csv")) csvs.push_back(f);
  std::size_t same = 0;
  for (const auto& f : csvs) {
    const auto x = slurp(a.dir / f);
    if (!x.empty() && x == slurp(b.dir / f)) ++same;
  }
  v.require(!csvs.empty() && a.m.files == b.m.files, "same file list (" + std::to_string(csvs.size()) + " CSVs)");
  v.require(same == csvs.size(), std::to_string(same) + "/" + std::to_string(csvs.size()) + " CSVs byte-identical");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7, criterion8,
                                                      criterion9, criterion10, criterion11};
  fs::remove_all(scratch_root());
  fs::create_directories(scratch_root());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %zu: %s\n", v.pass ? "PASS" : "FAIL", i + 1, v.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(scratch_root());
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
