#include "landau/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "landau/checkpoint.hpp"
#include "landau/csv.hpp"
#include "landau/linear_theory.hpp"
#include "landau/penrose.hpp"

#ifndef LANDAU_VERSION
#define LANDAU_VERSION "0.0.0"
#endif

namespace landau::harness {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double abs_vec(const std::array<cplx, 2>& e) { return std::sqrt(std::norm(e[0]) + std::norm(e[1])); }

struct Context {
  const RunConfig& cfg;
  equilibria::Equilibrium eq;
  fs::path dir;
  RunManifest& m;
  const Log& log;

  void say(const std::string& s) const {
    if (log) log(s);
  }
  CsvWriter csv(const std::string& name, std::vector<std::string> cols) {
    m.files.push_back(name);
    return CsvWriter(dir / name, std::move(cols));
  }
  void check(const std::string& name, bool passed, double value, double limit) {
    m.checks.push_back({name, passed, value, limit});
    say(std::string(passed ? "  ok    " : "  FAIL  ") + name + " (" + format_double(value) + " vs " +
        format_double(limit) + ")");
  }
};

// Positive half of the mode lattice for the linear scenarios.
std::vector<Mode> linear_modes(int dim, int k_max) {
  std::vector<Mode> out;
  for (const Mode& k : penrose::scan_modes(dim, k_max))
    if (k[0] > 0 || (k[0] == 0 && k[1] > 0)) out.push_back(k);
  return out;
}

kinetic::SeedSpec linear_seed(const std::vector<Mode>& modes, double amp) {
  kinetic::SeedSpec seed;
  for (const Mode& k : modes) seed.push_back({k, amp, 0.0, kinetic::Species::plus, {}});
  return seed;
}

void penrose_section(Context& ctx) {
  const auto& cfg = ctx.cfg;
  auto opt = cfg.penrose;
  opt.keep_samples = true;
  ctx.say("penrose: scanning |D| on Re lambda = 0");
  auto rep = penrose::penrose_infimum(ctx.eq, opt);
  // kappa0 defaults to the computed boundary infimum.
  const double kappa0 = cfg.kappa0_given ? cfg.penrose.kappa0 : rep.inf_modulus;
  if (!cfg.kappa0_given) rep.alpha0 = penrose::alpha_threshold(kappa0, ctx.eq.c_mu, ctx.eq.theta0);
  auto out = ctx.csv("penrose_samples.csv", {"k", "im_lambda", "abs_D"});
  for (const auto& s : rep.samples) out.row({landau::to_string(s.k, cfg.dim), s.im_lambda, s.abs_d});
  out.close();
  std::ostringstream line;
  line << "inf=" << format_double(rep.inf_modulus) << " at k=" << landau::to_string(rep.argmin_k, cfg.dim)
       << " imlambda=" << format_double(rep.argmin_lambda.imag());
  ctx.say(line.str());
  ctx.m.set_metric("penrose_inf_modulus", rep.inf_modulus);
  ctx.m.set_metric("penrose_argmin_im_lambda", rep.argmin_lambda.imag());
  ctx.m.set_metric("penrose_kappa0", kappa0);
  ctx.m.set_metric("penrose_alpha0", rep.alpha0);
  ctx.m.set_metric("penrose_tail_bound", rep.tail_bound);
  ctx.check("penrose margin clears kappa0/2", rep.inf_modulus - rep.tail_bound >= 0.5 * kappa0,
            rep.inf_modulus - rep.tail_bound, 0.5 * kappa0);
  ctx.check("no interior dip below the boundary infimum", !rep.interior_flag, rep.interior_flag ? 1.0 : 0.0, 0.0);
  ctx.check("epsilon within the perturbed-margin threshold alpha0", cfg.epsilon <= rep.alpha0, cfg.epsilon, rep.alpha0);
}

struct LinearResult {
  SourceSeries src;
  std::optional<DensitySeries> volterra;
  std::optional<DensitySeries> resolvent;
  const DensitySeries& best() const { return volterra ? *volterra : *resolvent; }
};

LinearResult linear_section(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& lin = cfg.linear;
  const TimeGrid grid = TimeGrid::covering(lin.dt, lin.t_max);
  const auto modes = linear_modes(cfg.dim, lin.k_max);
  const auto seed = linear_seed(modes, lin.amp);
  LinearResult r{linear::build_source(kinetic::seed_spectrum(seed, kinetic::Species::plus, cfg.dim),
                                      kinetic::seed_spectrum(seed, kinetic::Species::minus, cfg.dim), grid, modes,
                                      cfg.dim),
                 std::nullopt, std::nullopt};
  const bool want_v = lin.method != LinearMethod::resolvent;
  const bool want_r = lin.method != LinearMethod::volterra;
  if (want_v) {
    ctx.say("linear: Volterra marching");
    r.volterra = linear::solve_volterra(r.src, ctx.eq, cfg.epsilon);
    ctx.m.set_metric("volterra_residual", linear::volterra_residual(*r.volterra, r.src, ctx.eq, cfg.epsilon));
  }
  if (want_r) {
    ctx.say("linear: resolvent reconstruction");
    std::vector<linear::KernelSeries> kernels;
    for (const Mode& k : modes)
      kernels.push_back(linear::kernel_inverse_laplace(ctx.eq, cfg.epsilon, k, cfg.theta1, grid, lin.kernel));
    r.resolvent = linear::reconstruct_rho(r.src, kernels, cfg.epsilon);
  }
  const auto& rho = r.best();

  std::vector<std::string> cols{"t", "k", "re_rho", "im_rho", "abs_rho", "abs_S"};
  if (want_v && want_r) cols.push_back("discrepancy");
  auto out = ctx.csv("linear_rho.csv", cols);
  double max_rho = 0.0, max_gap = 0.0, eps0_gap = 0.0, max_s = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n)
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const cplx v = rho.rho[i][n];
      const cplx s = r.src.s_plus[i][n] - r.src.s_minus[i][n];
      std::vector<CsvWriter::Cell> row{grid.t(n), landau::to_string(modes[i], cfg.dim), v.real(), v.imag(), std::abs(v),
                                       std::abs(s)};
      max_rho = std::max(max_rho, std::abs(v));
      max_s = std::max(max_s, std::abs(r.src.s_plus[i][n]));
      if (want_v && want_r) {
        const double gap = std::abs(r.volterra->rho[i][n] - r.resolvent->rho[i][n]);
        max_gap = std::max(max_gap, gap);
        row.push_back(gap);
      }
      for (const auto* d : {r.volterra ? &*r.volterra : nullptr, r.resolvent ? &*r.resolvent : nullptr})
        if (d) eps0_gap = std::max(eps0_gap, std::abs(d->rho_plus[i][n] - r.src.s_plus[i][n]));
    }
  out.close();
  if (want_v && want_r) {
    const double rel = max_rho > 0.0 ? max_gap / max_rho : 0.0;
    ctx.m.set_metric("linear_two_path_rel_error", rel);
    ctx.check("Volterra and resolvent paths agree", rel <= 1e-3, rel, 1e-3);
  }
  if (cfg.epsilon == 0.0) {
    const double lim = 4.0 * std::numeric_limits<double>::epsilon() * std::max(max_s, 1e-300);
    ctx.check("rho_plus equals S_plus (epsilon=0 identity)", eps0_gap <= lim, eps0_gap, lim);
  }

  const auto fit = linear::verify_linear_gevrey(rho, r.src, cfg.gevrey, cfg.theta1, cfg.z_eval);
  auto gv = ctx.csv("linear_gevrey.csv", {"t", "F_rho", "F_S", "memory"});
  for (std::size_t n = 0; n < grid.size(); ++n) gv.row({grid.t(n), fit.f_rho[n], fit.f_source[n], fit.memory[n]});
  gv.close();
  ctx.m.set_metric("linear_gevrey_c_fit", fit.c_fit);
  ctx.check("Gevrey estimate holds with a finite constant", std::isfinite(fit.c_fit), fit.c_fit, INFINITY);

  std::vector<double> ts(grid.size()), es(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    ts[n] = grid.t(n);
    es[n] = 0.0;
    for (const auto& e : rho.e_field) es[n] += abs_vec(e[n]);
  }
  if (lin.t_max > 4.0) {
    const auto f = generators::fit_decay(ts, es, 2.0, lin.t_max);
    ctx.m.set_metric("linear_decay_rate", f.lambda_fit);
    ctx.m.set_metric("linear_decay_r2", f.r2);
  }
  return r;
}

void kernel_section(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const TimeGrid grid = TimeGrid::covering(cfg.linear.dt, cfg.linear.t_max);
  auto series = ctx.csv("kernel_series.csv", {"t", "k", "re_K", "im_K", "abs_K"});
  auto fits = ctx.csv("kernel_fit.csv", {"k", "fit_c", "fit_theta", "fit_r2", "contour_re", "im_cutoff",
                                         "min_denominator", "forward_rel_error"});
  for (const Mode& k : linear_modes(cfg.dim, cfg.linear.k_max)) {
    ctx.say("kernel: k=" + landau::to_string(k, cfg.dim));
    const auto ker = linear::kernel_inverse_laplace(ctx.eq, cfg.epsilon, k, cfg.theta1, grid, cfg.linear.kernel);
    for (std::size_t n = 0; n < grid.size(); ++n)
      series.row({grid.t(n), landau::to_string(k, cfg.dim), ker.k_hat[n].real(), ker.k_hat[n].imag(), std::abs(ker.k_hat[n])});
    double worst = 0.0;
    for (double im : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const cplx lam(1.0, im);
      const cplx want = linear::resolvent_symbol(ctx.eq, cfg.epsilon, k, lam);
      worst = std::max(worst, std::abs(linear::forward_laplace(ker, lam) - want) / std::abs(want));
    }
    fits.row({landau::to_string(k, cfg.dim), ker.fit_c, ker.fit_theta, ker.fit_r2, ker.contour_re, ker.im_cutoff,
              ker.min_denominator, worst});
    const std::string tag = "kernel_k" + landau::to_string(k, cfg.dim);
    ctx.m.set_metric(tag + "_fit_theta", ker.fit_theta);
    ctx.m.set_metric(tag + "_forward_rel_error", worst);
    ctx.check("kernel decay rate at k=" + landau::to_string(k, cfg.dim) + " reaches theta1", ker.fit_theta >= cfg.theta1,
              ker.fit_theta, cfg.theta1);
    ctx.check("forward Laplace reproduces K_tilde at k=" + landau::to_string(k, cfg.dim), worst <= 1e-5, worst, 1e-5);
  }
  series.close();
  fits.close();
}

void nonlinear_section(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& nl = cfg.nonlinear;
  const auto& sim = nl.sim;
  kinetic::Solver solver(sim, ctx.eq);
  const auto& L = solver.lattice();
  const Mode k0{nl.seed_k, 0};
  const kinetic::SeedSpec seed{{k0, sim.amp, 0.0, nl.seed_species, {}}};
  auto init = solver.init_state(seed, cfg.gevrey);
  auto state = std::move(init.state);
  ctx.m.set_metric("nonlinear_g_initial", init.g_initial);
  const auto d0 = solver.diagnostics(state);

  std::vector<std::size_t> shown;
  for (std::size_t i = 0; i < L.modes().size(); ++i) {
    const Mode& k = L.modes()[i];
    if (k[0] > 0 || (k[0] == 0 && k[1] > 0)) shown.push_back(i);
  }
  const std::size_t i0 = std::find(L.modes().begin(), L.modes().end(), k0) - L.modes().begin();

  auto modes_csv = ctx.csv("nonlinear_modes.csv", {"t", "k", "abs_rho_k", "abs_E_k"});
  auto diag_csv = ctx.csv("nonlinear_diagnostics.csv", {"t", "z", "F", "G", "G_pow", "c0_est", "lambda_used"});
  const auto steps = static_cast<std::size_t>(std::llround(sim.t_max / sim.dt));
  std::vector<double> ts, e0, rho0_re, rho0_im;
  double mass_drift = 0.0, neutral = d0.neutrality, reality = d0.reality_defect, c0_max = 0.0;
  double frame_abs = 0.0, frame_top = 0.0;
  bool f_monotone = true;
  const double p = 1.0 / (cfg.dim + 1.0);
  std::vector<generators::L41Snapshot> l41;
  const double dz = 0.2 * cfg.z_eval;

  auto snapshot = [&](std::size_t n) {
    const auto rho = solver.charge(state);
    const auto e = kinetic::field_from_density(L.modes(), rho);
    for (std::size_t i : shown) modes_csv.row({state.t, landau::to_string(L.modes()[i], cfg.dim), std::abs(rho[i]), abs_vec(e[i])});
    const auto frame = solver.gliding_frame(state);
    const double lam = generators::lambda_schedule(state.t, cfg.gevrey);
    double f_at[2];
    const double zs[2] = {cfg.z_eval, lam};
    for (int j = 0; j < 2; ++j) {
      const auto f = generators::f_functional(L.modes(), rho, state.t, zs[j], cfg.gevrey);
      const auto g = generators::g_functional(frame.plus, frame.minus, zs[j], cfg.gevrey);
      const auto r = generators::check_embedding(f.value, g.value, cfg.dim);
      diag_csv.row({state.t, zs[j], f.value, g.value, std::pow(g.value, p), r.c0_est, lam});
      c0_max = std::max(c0_max, r.c0_est);
      f_at[j] = f.value;
    }
    if ((zs[1] - zs[0]) * (f_at[1] - f_at[0]) < 0.0) f_monotone = false;
    if (dz > 0.0) {
      generators::L41Snapshot snap{state.t, f_at[0], 0.0, 0.0, 0.0, dz};
      snap.g = generators::g_functional(frame.plus, frame.minus, cfg.z_eval, cfg.gevrey).value;
      snap.g_zplus = generators::g_functional(frame.plus, frame.minus, cfg.z_eval + dz, cfg.gevrey).value;
      snap.g_zminus = generators::g_functional(frame.plus, frame.minus, cfg.z_eval - dz, cfg.gevrey).value;
      l41.push_back(snap);
    }
    // Density from the gliding frame at eta = k t, against the quadrature density.
    double top = 0.0, err = 0.0;
    for (auto s : {kinetic::Species::plus, kinetic::Species::minus}) {
      const auto dens = solver.density(state, s);
      const auto& spec = s == kinetic::Species::plus ? frame.plus : frame.minus;
      for (std::size_t i = 0; i < L.modes().size(); ++i) {
        const Mode& k = L.modes()[i];
        if (std::max(std::abs(k[0]), std::abs(k[1])) > 4) continue;
        top = std::max(top, std::abs(dens[i]));
        err = std::max(err, std::abs(kinetic::interpolate(spec, i, scale(k, state.t), sim.v_max) - dens[i]));
      }
    }
    frame_top = std::max(frame_top, top);
    frame_abs = std::max(frame_abs, err);
    if (nl.checkpoint_every > 0 && n % static_cast<std::size_t>(nl.checkpoint_every) == 0 && n > 0) {
      char name[40];
      std::snprintf(name, sizeof name, "checkpoint_%06zu.bin", n);
      kinetic::write_checkpoint(ctx.dir / name, sim, state);
      ctx.m.files.push_back(name);
    }
  };

  ctx.say("nonlinear: " + std::to_string(steps) + " steps");
  for (std::size_t n = 0;; ++n) {
    const auto rho = solver.charge(state);
    ts.push_back(state.t);
    double e_sum = 0.0;
    for (std::size_t i : shown) e_sum += abs_vec(field_mode(L.modes()[i], rho[i]));
    e0.push_back(e_sum);
    rho0_re.push_back(rho[i0].real());
    rho0_im.push_back(rho[i0].imag());
    const auto d = solver.diagnostics(state);
    if (state.t > 0.0)
      mass_drift = std::max(mass_drift, std::max(std::abs(d.mass_plus - d0.mass_plus), std::abs(d.mass_minus - d0.mass_minus)) / state.t);
    neutral = std::max(neutral, d.neutrality);
    reality = std::max(reality, d.reality_defect);
    if (n % static_cast<std::size_t>(nl.snap_every) == 0 || n == steps) snapshot(n);
    if (n == steps) break;
    solver.step(state);
  }
  modes_csv.close();
  diag_csv.close();
  kinetic::write_checkpoint(ctx.dir / "checkpoint_final.bin", sim, state);
  ctx.m.files.push_back("checkpoint_final.bin");

  // Linear reference for the seeded mode on a five-times finer grid.
  const TimeGrid fine = TimeGrid::covering(sim.dt / 5.0, static_cast<double>(steps) * sim.dt);
  const auto src = linear::build_source(kinetic::seed_spectrum(seed, kinetic::Species::plus, cfg.dim),
                                        kinetic::seed_spectrum(seed, kinetic::Species::minus, cfg.dim), fine, {k0},
                                        cfg.dim);
  const auto ref = linear::solve_volterra(src, ctx.eq, cfg.epsilon);
  double gap = 0.0, top = 0.0;
  for (std::size_t n = 0; n < ts.size(); ++n) {
    const cplx v = ref.rho[0][std::min(5 * n, fine.steps)];
    gap = std::max(gap, std::abs(cplx(rho0_re[n], rho0_im[n]) - v));
    top = std::max(top, std::abs(v));
  }
  ctx.m.set_metric("nonlinear_linear_gap_rel", top > 0.0 ? gap / top : 0.0);
  ctx.m.set_metric("nonlinear_linear_gap_abs", gap);
  ctx.m.set_metric("linear_reference_rho_max", top);
  const double frame_err = frame_top > 0.0 ? frame_abs / frame_top : 0.0;
  if (ts.back() > 4.0) {
    const auto f = generators::fit_decay(ts, e0, 2.0, std::min(20.0, ts.back()));
    ctx.m.set_metric("nonlinear_decay_rate", f.lambda_fit);
    ctx.m.set_metric("nonlinear_decay_r2", f.r2);
  }
  ctx.m.set_metric("max_c0_est", c0_max);
  double l41_c = 0.0;
  if (l41.size() >= 3) {
    l41_c = generators::check_l41_inequality(l41, cfg.dim).c_min;
    ctx.m.set_metric("g_evolution_c_min", l41_c);
  }
  ctx.m.set_metric("mass_drift_per_time", mass_drift);
  ctx.m.set_metric("max_neutrality", neutral);
  ctx.m.set_metric("max_reality_defect", reality);
  ctx.m.set_metric("frame_identity_rel_error", frame_err);
  ctx.check("species mass drift per unit time", mass_drift <= 1e-10, mass_drift, 1e-10);
  ctx.check("neutrality mode", neutral <= 1e-12, neutral, 1e-12);
  ctx.check("reality symmetry", reality <= 1e-12, reality, 1e-12);
  ctx.check("gliding-frame density identity", frame_err <= 1e-8, frame_err, 1e-8);
  ctx.check("embedding constant finite", std::isfinite(c0_max), c0_max, INFINITY);
  ctx.check("F monotone in z", f_monotone, f_monotone ? 0.0 : 1.0, 0.0);
  if (l41.size() >= 3) ctx.check("G-evolution constant finite", std::isfinite(l41_c), l41_c, INFINITY);
}

void write_manifest(const fs::path& dir, RunManifest& m) {
  m.finished = utc_now();
  if (std::find(m.files.begin(), m.files.end(), "manifest.json") == m.files.end()) m.files.push_back("manifest.json");
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << manifest_json(m) << '\n';
  if (!out) throw Error("cannot write manifest in " + dir.string());
}

}  // namespace

const char* version() { return LANDAU_VERSION; }

void RunManifest::set_metric(const std::string& name, double value) {
  for (auto& [k, v] : metrics)
    if (k == name) {
      v = value;
      return;
    }
  metrics.emplace_back(name, value);
}

std::optional<double> RunManifest::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  return std::nullopt;
}

bool RunManifest::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string manifest_json(const RunManifest& m) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return format_double(x);
  };
  nlohmann::ordered_json j;
  j["scenario"] = m.scenario;
  j["config_hash"] = m.config_hash;
  j["version"] = m.version;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["files"] = m.files;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.metrics) metrics[k] = num(v);
  j["metrics"] = metrics;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : m.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", num(c.value)}, {"limit", num(c.limit)}});
  j["checks"] = checks;
  j["all_passed"] = m.all_passed();
  return j.dump(2);
}

RunManifest run_scenario(const RunConfig& cfg, const Log& log) {
  RunManifest m;
  m.scenario = to_string(cfg.scenario);
  m.config_hash = config_hash(cfg);
  m.version = version();
  m.started = utc_now();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  std::string stage = m.scenario;
  try {
    Context ctx{cfg, make_equilibrium(cfg), dir, m, log};
    auto gate = [&](const std::string& next) {
      if (!m.all_passed()) {
        write_manifest(dir, m);
        for (const auto& c : m.checks)
          if (!c.passed) throw InvariantBreach("check failed: " + c.name);
      }
      stage = next;
    };
    switch (cfg.scenario) {
      case Scenario::penrose: penrose_section(ctx); break;
      case Scenario::linear: linear_section(ctx); break;
      case Scenario::kernel: kernel_section(ctx); break;
      case Scenario::nonlinear: nonlinear_section(ctx); break;
      case Scenario::full_report:
        stage = "penrose";
        penrose_section(ctx);
        gate("linear");
        linear_section(ctx);
        gate("kernel");
        kernel_section(ctx);
        gate("nonlinear");
        nonlinear_section(ctx);
        break;
    }
    gate(stage);
  } catch (const InvariantBreach& e) {
    if (std::string(e.what()).rfind("check failed", 0) == 0) throw;
    throw InvariantBreach(stage + ": " + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw DomainError(stage + ": " + e.what());
  }
  write_manifest(dir, m);
  return m;
}

}  // namespace landau::harness
