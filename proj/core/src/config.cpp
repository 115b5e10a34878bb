#include "landau/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace landau::harness {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") return out = true, true;
  if (s == "false" || s == "0" || s == "no") return out = false, true;
  return false;
}

// One accepted key: applies a textual value, returning an error string or "".
struct KeySpec {
  std::string name;
  std::function<std::string(RunConfig&, const std::string&)> apply;
  std::function<std::string(const RunConfig&)> show;
};

KeySpec real_key(std::string name, std::function<double&(RunConfig&)> field) {
  return {name,
          [field, name](RunConfig& c, const std::string& v) -> std::string {
            double x;
            if (!parse_double(v, x)) return name + ": expected a number, got '" + v + "'";
            field(c) = x;
            return {};
          },
          [field](const RunConfig& c) { return fmt(field(const_cast<RunConfig&>(c))); }};
}

KeySpec int_key(std::string name, std::function<int&(RunConfig&)> field) {
  return {name,
          [field, name](RunConfig& c, const std::string& v) -> std::string {
            int x;
            if (!parse_int(v, x)) return name + ": expected an integer, got '" + v + "'";
            field(c) = x;
            return {};
          },
          [field](const RunConfig& c) { return std::to_string(field(const_cast<RunConfig&>(c))); }};
}

KeySpec bool_key(std::string name, std::function<bool&(RunConfig&)> field) {
  return {name,
          [field, name](RunConfig& c, const std::string& v) -> std::string {
            bool x;
            if (!parse_bool(v, x)) return name + ": expected true or false, got '" + v + "'";
            field(c) = x;
            return {};
          },
          [field](const RunConfig& c) { return std::string(field(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    t.push_back({"scenario",
                 [](RunConfig& c, const std::string& v) -> std::string {
                   static const std::map<std::string, Scenario> names{{"penrose", Scenario::penrose},
                                                                       {"linear", Scenario::linear},
                                                                       {"nonlinear", Scenario::nonlinear},
                                                                       {"kernel", Scenario::kernel},
                                                                       {"full-report", Scenario::full_report}};
                   auto it = names.find(v);
                   if (it == names.end()) return "scenario: unknown scenario '" + v + "'";
                   c.scenario = it->second;
                   return {};
                 },
                 [](const RunConfig& c) { return to_string(c.scenario); }});
    t.push_back({"equilibrium",
                 [](RunConfig& c, const std::string& v) -> std::string {
                   if (v != "gaussian") return "equilibrium: unknown equilibrium '" + v + "'";
                   c.equilibrium = v;
                   return {};
                 },
                 [](const RunConfig& c) { return c.equilibrium; }});
    t.push_back(int_key("dim", [](RunConfig& c) -> int& { return c.dim; }));
    t.push_back(real_key("epsilon", [](RunConfig& c) -> double& { return c.epsilon; }));
    t.push_back(real_key("theta0", [](RunConfig& c) -> double& { return c.theta0; }));
    t.push_back(real_key("theta1", [](RunConfig& c) -> double& { return c.theta1; }));
    t.push_back(real_key("h1_grid_radius", [](RunConfig& c) -> double& { return c.h1_grid.radius; }));
    t.push_back(real_key("h1_grid_step", [](RunConfig& c) -> double& { return c.h1_grid.step; }));

    t.push_back(real_key("penrose_alpha", [](RunConfig& c) -> double& { return c.penrose.alpha; }));
    t.push_back(int_key("penrose_k_max", [](RunConfig& c) -> int& { return c.penrose.k_max; }));
    t.push_back(real_key("penrose_im_max", [](RunConfig& c) -> double& { return c.penrose.im_max; }));
    t.push_back(real_key("penrose_step", [](RunConfig& c) -> double& { return c.penrose.step; }));
    t.push_back(real_key("penrose_tol", [](RunConfig& c) -> double& { return c.penrose.tol; }));
    t.push_back({"kappa0",
                 [](RunConfig& c, const std::string& v) -> std::string {
                   double x;
                   if (!parse_double(v, x)) return "kappa0: expected a number, got '" + v + "'";
                   c.penrose.kappa0 = x;
                   c.kappa0_given = true;
                   return {};
                 },
                 [](const RunConfig& c) { return c.kappa0_given ? fmt(c.penrose.kappa0) : std::string("auto"); }});

    t.push_back(real_key("linear_dt", [](RunConfig& c) -> double& { return c.linear.dt; }));
    t.push_back(real_key("linear_t_max", [](RunConfig& c) -> double& { return c.linear.t_max; }));
    t.push_back(int_key("linear_k_max", [](RunConfig& c) -> int& { return c.linear.k_max; }));
    t.push_back({"linear_method",
                 [](RunConfig& c, const std::string& v) -> std::string {
                   if (v == "volterra")
                     c.linear.method = LinearMethod::volterra;
                   else if (v == "resolvent")
                     c.linear.method = LinearMethod::resolvent;
                   else if (v == "both")
                     c.linear.method = LinearMethod::both;
                   else
                     return "linear_method: expected volterra, resolvent or both, got '" + v + "'";
                   return {};
                 },
                 [](const RunConfig& c) { return to_string(c.linear.method); }});
    t.push_back(real_key("linear_amp", [](RunConfig& c) -> double& { return c.linear.amp; }));
    t.push_back(real_key("kernel_tol", [](RunConfig& c) -> double& { return c.linear.kernel.tol; }));
    t.push_back(real_key("denominator_floor", [](RunConfig& c) -> double& { return c.linear.kernel.denominator_floor; }));

    t.push_back(real_key("amp", [](RunConfig& c) -> double& { return c.nonlinear.sim.amp; }));
    t.push_back(real_key("sim_dt", [](RunConfig& c) -> double& { return c.nonlinear.sim.dt; }));
    t.push_back(real_key("sim_t_max", [](RunConfig& c) -> double& { return c.nonlinear.sim.t_max; }));
    t.push_back(int_key("n_x", [](RunConfig& c) -> int& { return c.nonlinear.sim.n_x; }));
    t.push_back(int_key("n_v", [](RunConfig& c) -> int& { return c.nonlinear.sim.n_v; }));
    t.push_back(real_key("v_max", [](RunConfig& c) -> double& { return c.nonlinear.sim.v_max; }));
    t.push_back(real_key("boundary_tol", [](RunConfig& c) -> double& { return c.nonlinear.sim.boundary_tol; }));
    t.push_back(real_key("alias_tol", [](RunConfig& c) -> double& { return c.nonlinear.sim.alias_tol; }));
    t.push_back(bool_key("zero_field", [](RunConfig& c) -> bool& { return c.nonlinear.sim.zero_field; }));
    t.push_back(int_key("seed_k", [](RunConfig& c) -> int& { return c.nonlinear.seed_k; }));
    t.push_back({"seed_species",
                 [](RunConfig& c, const std::string& v) -> std::string {
                   if (v == "plus")
                     c.nonlinear.seed_species = kinetic::Species::plus;
                   else if (v == "minus")
                     c.nonlinear.seed_species = kinetic::Species::minus;
                   else
                     return "seed_species: expected plus or minus, got '" + v + "'";
                   return {};
                 },
                 [](const RunConfig& c) {
                   return std::string(c.nonlinear.seed_species == kinetic::Species::plus ? "plus" : "minus");
                 }});
    t.push_back(int_key("snap_every", [](RunConfig& c) -> int& { return c.nonlinear.snap_every; }));
    t.push_back(int_key("checkpoint_every", [](RunConfig& c) -> int& { return c.nonlinear.checkpoint_every; }));

    t.push_back(real_key("gamma", [](RunConfig& c) -> double& { return c.gevrey.gamma; }));
    t.push_back(real_key("sigma", [](RunConfig& c) -> double& { return c.gevrey.sigma; }));
    t.push_back(real_key("alpha", [](RunConfig& c) -> double& { return c.gevrey.alpha; }));
    t.push_back(real_key("lambda0", [](RunConfig& c) -> double& { return c.gevrey.lambda0; }));
    t.push_back(real_key("delta", [](RunConfig& c) -> double& { return c.gevrey.delta; }));
    t.push_back(real_key("lambda1", [](RunConfig& c) -> double& { return c.gevrey.lambda1; }));
    t.push_back(real_key("z_eval", [](RunConfig& c) -> double& { return c.z_eval; }));
    t.push_back({"output_dir",
                 [](RunConfig& c, const std::string& v) -> std::string {
                   if (v.empty()) return "output_dir: must not be empty";
                   c.output_dir = v;
                   return {};
                 },
                 [](const RunConfig& c) { return c.output_dir; }});
    return t;
  }();
  return table;
}

RunConfig defaults() {
  RunConfig c;
  // Harness defaults for the kinetic block: a grid whose eta range covers
  // |k| t for every retained mode up to t = 20.
  c.nonlinear.sim.n_x = 16;
  c.nonlinear.sim.n_v = 512;
  c.nonlinear.sim.t_max = 20.0;
  c.nonlinear.sim.dt = 0.05;
  return c;
}

std::vector<std::string> cross_field(const RunConfig& c, bool theta1_given) {
  std::vector<std::string> out;
  if (c.dim != 1 && c.dim != 2) out.push_back("dim must be 1 or 2");
  if (!(c.epsilon >= 0.0)) out.push_back("epsilon must be non-negative");
  if (!(c.theta0 > 0.0)) out.push_back("theta0 must be positive");
  if (!(c.theta1 > 0.0 && c.theta1 < c.theta0))
    out.push_back("theta1 must satisfy 0 < theta1 < theta0=" + fmt(c.theta0) + " (got " + fmt(c.theta1) +
                  (theta1_given ? ")" : ", the default theta0/2)"));
  if (!(c.h1_grid.radius > 0.0 && c.h1_grid.step > 0.0)) out.push_back("h1_grid_radius and h1_grid_step must be positive");
  if (c.penrose.k_max < 1) out.push_back("penrose_k_max must be at least 1");
  if (!(c.penrose.im_max > 0.0 && c.penrose.step > 0.0)) out.push_back("penrose_im_max and penrose_step must be positive");
  if (!(c.penrose.tol > 0.0)) out.push_back("penrose_tol must be positive");
  if (!(c.penrose.alpha >= 0.0)) out.push_back("penrose_alpha must be non-negative");
  if (!(c.linear.dt > 0.0 && c.linear.t_max > 0.0)) out.push_back("linear_dt and linear_t_max must be positive");
  if (c.linear.k_max < 1) out.push_back("linear_k_max must be at least 1");
  if (!(c.linear.kernel.tol > 0.0)) out.push_back("kernel_tol must be positive");
  if (!(c.z_eval >= 0.0 && c.z_eval <= c.theta1 / 2.0))
    out.push_back("z_eval must lie in [0, theta1/2]=[0," + fmt(c.theta1 / 2.0) + "]");
  for (auto& v : c.gevrey.violations(c.theta1)) out.push_back(v);
  for (auto& v : c.nonlinear.sim.violations()) out.push_back(v);
  if (c.nonlinear.snap_every < 1) out.push_back("snap_every must be at least 1");
  if (c.nonlinear.checkpoint_every < 0) out.push_back("checkpoint_every must be non-negative");
  const int kcut = c.nonlinear.sim.n_x / 3;
  if (c.nonlinear.seed_k < 1 || c.nonlinear.seed_k > kcut)
    out.push_back("seed_k must lie in [1, n_x/3]=[1," + std::to_string(kcut) + "]");
  return out;
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::penrose: return "penrose";
    case Scenario::linear: return "linear";
    case Scenario::nonlinear: return "nonlinear";
    case Scenario::kernel: return "kernel";
    case Scenario::full_report: return "full-report";
  }
  return "?";
}

std::string to_string(LinearMethod m) {
  switch (m) {
    case LinearMethod::volterra: return "volterra";
    case LinearMethod::resolvent: return "resolvent";
    case LinearMethod::both: return "both";
  }
  return "?";
}

RawConfig parse_config_text(std::string_view text) {
  RawConfig out;
  std::vector<std::string> problems;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    // Strip a trailing comment, honouring quotes.
    std::string body;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      if (ch == '#' && !quoted) break;
      body += ch;
    }
    if (quoted) {
      problems.push_back("line " + std::to_string(lineno) + ": unterminated string");
      continue;
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      problems.push_back("line " + std::to_string(lineno) + ": missing key");
      continue;
    }
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out.emplace_back(std::move(key), std::move(value));
  }
  if (!problems.empty()) throw ConfigError(problems);
  return out;
}

RawConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.push_back(k.name);
  return out;
}

RunConfig resolve_config(const RawConfig& raw) {
  RunConfig c = defaults();
  std::vector<std::string> problems;
  std::map<std::string, const KeySpec*> index;
  for (const auto& k : key_table()) index[k.name] = &k;
  bool theta1_given = false, step_given = false;
  for (const auto& [key, value] : raw) {
    auto it = index.find(key);
    if (it == index.end()) {
      problems.push_back("unknown key '" + key + "'");
      continue;
    }
    if (key == "theta1") theta1_given = true;
    if (key == "h1_grid_step") step_given = true;
    if (auto err = it->second->apply(c, value); !err.empty()) problems.push_back(err);
  }
  if (!theta1_given) c.theta1 = c.theta0 / 2.0;
  if (!step_given && c.dim == 2) c.h1_grid.step = 0.05;
  c.nonlinear.sim.dim = c.dim;
  c.nonlinear.sim.epsilon = c.epsilon;
  c.gevrey.dim = c.dim;
  for (auto& v : cross_field(c, theta1_given)) problems.push_back(v);
  if (!problems.empty()) throw ConfigError(problems);
  for (const auto& k : key_table()) c.resolved.emplace_back(k.name, k.show(c));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return resolve_config(read_config_file(path)); }

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : cfg.resolved) {
    // The output location does not change any result.
    if (k == "output_dir") continue;
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

equilibria::Equilibrium make_equilibrium(const RunConfig& cfg) {
  auto eq = equilibria::by_name(cfg.equilibrium, cfg.dim);
  const auto cert = equilibria::certify_h1(eq, cfg.theta0, cfg.h1_grid);
  if (!cert.ok || !cert.tail_ok)
    throw DomainError("equilibrium '" + cfg.equilibrium + "' fails the decay certificate at theta0=" + fmt(cfg.theta0));
  eq.c_mu = cert.c_mu;
  eq.theta0 = cfg.theta0;
  return eq;
}

}  // namespace landau::harness
