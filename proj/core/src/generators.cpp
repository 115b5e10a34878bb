#include "landau/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace landau::generators {

namespace {

constexpr double kLogMax = 709.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp with a fixed accumulation order.
struct LogSum {
  double m = kNegInf;
  double s = 0.0;
  void add(double lv) {
    if (lv == kNegInf) return;
    if (lv <= m) {
      s += std::exp(lv - m);
    } else {
      s = s * std::exp(m - lv) + 1.0;
      m = lv;
    }
  }
  double log() const { return s > 0.0 ? m + std::log(s) : kNegInf; }
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> GevreyParams::violations(double theta1) const {
  std::vector<std::string> out;
  const double smin = std::max(dim + 1.0, 3.0);
  if (!(gamma > 0.0 && gamma <= 1.0)) out.push_back("gamma must lie in (0,1]");
  if (!(sigma > smin))
    out.push_back("sigma must exceed max{d+1,3}=" + fmt_double(smin));
  if (!(alpha > 0.0 && alpha < 1.0 / (dim + 1.0)))
    out.push_back("alpha must lie in (0, 1/(d+1))=(0," + fmt_double(1.0 / (dim + 1.0)) + ")");
  if (!(lambda0 > 0.0 && lambda0 <= 1.0)) out.push_back("lambda0 must lie in (0,1]");
  if (!(delta > 0.0 && delta < 1.0)) out.push_back("delta must lie in (0,1)");
  if (!(lambda1 > 0.0)) out.push_back("lambda1 must be positive");
  const double cap = std::min(lambda1 / 4.0, theta1 / 4.0);
  if (!(lambda0 <= cap))
    out.push_back("lambda0 must not exceed min{lambda1/4, theta1/4}=" + fmt_double(cap));
  return out;
}

double bracket(const Mode& k, const RVec& eta) {
  const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
  return std::sqrt(1.0 + k2 + dot(eta, eta));
}

double log_weight(const Mode& k, const RVec& eta, double z, const GevreyParams& p) {
  const double b = bracket(k, eta);
  return z * std::pow(b, p.gamma) + p.sigma * std::log(b);
}

double weight(const Mode& k, const RVec& eta, double z, const GevreyParams& p) {
  return std::exp(log_weight(k, eta, z, p));
}

FResult f_functional(std::span<const Mode> modes, std::span<const cplx> rho, double t, double z,
                     const GevreyParams& p) {
  if (modes.size() != rho.size()) throw DomainError("f_functional: mode/value count mismatch");
  if (!(z >= 0.0)) throw DomainError("f_functional: z must be non-negative");
  FResult r;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Mode& k = modes[i];
    if (is_zero(k)) continue;
    const double mag = std::abs(rho[i]);
    if (mag == 0.0) continue;
    const double lv = log_weight(k, scale(k, t), z, p) + std::log(mag) - p.alpha * std::log(norm(k));
    if (lv > kLogMax) {
      std::ostringstream os;
      os << "f_functional: weight overflow at k=" << to_string(k, p.dim) << " t=" << t;
      throw DomainError(os.str());
    }
    if (lv > r.log_value) {
      r.log_value = lv;
      r.argmax_k = k;
    }
  }
  r.value = r.log_value == kNegInf ? 0.0 : std::exp(r.log_value);
  return r;
}

FResult f_functional(const DensitySeries& rho, std::size_t time_index, double z, const GevreyParams& p) {
  std::vector<cplx> vals(rho.k_set.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = rho.rho[i][time_index];
  return f_functional(rho.k_set, vals, rho.grid.t(time_index), z, p);
}

std::size_t GlidingSpectrum::points() const {
  return dim == 1 ? static_cast<std::size_t>(n_eta) : static_cast<std::size_t>(n_eta) * n_eta;
}

RVec GlidingSpectrum::eta(std::size_t flat) const {
  const int half = n_eta / 2;
  if (dim == 1) return {(static_cast<int>(flat) - half) * deta, 0.0};
  const int a = static_cast<int>(flat / n_eta), b = static_cast<int>(flat % n_eta);
  return {(a - half) * deta, (b - half) * deta};
}

GResult g_functional(const GlidingSpectrum& plus, const GlidingSpectrum& minus, double z,
                     const GevreyParams& p, double quad_tol) {
  if (plus.modes != minus.modes || plus.n_eta != minus.n_eta || plus.deta != minus.deta || plus.dim != minus.dim)
    throw DomainError("g_functional: species spectra live on different grids");
  if (!(z >= 0.0)) throw DomainError("g_functional: z must be non-negative");
  const int d = plus.dim;
  const double q = d + 1.0;
  const std::size_t npts = plus.points();
  const double log_cell = d * std::log(plus.deta);
  const int half = plus.n_eta / 2;
  const int band = std::max(1, plus.n_eta / 20);

  LogSum all, even, edge;
  std::map<long, LogSum> shells;
  for (std::size_t mi = 0; mi < plus.modes.size(); ++mi) {
    const Mode& k = plus.modes[mi];
    LogSum& shell = shells[std::lround(norm(k))];
    for (std::size_t e = 0; e < npts; ++e) {
      const RVec eta = plus.eta(e);
      const double lw = q * log_weight(k, eta, z, p) + log_cell;
      bool is_even, is_edge;
      if (d == 1) {
        const int m = static_cast<int>(e) - half;
        is_even = (m % 2) == 0;
        is_edge = static_cast<int>(e) < band || static_cast<int>(e) >= plus.n_eta - band;
      } else {
        const int a = static_cast<int>(e / plus.n_eta), b = static_cast<int>(e % plus.n_eta);
        is_even = ((a - half) % 2 == 0) && ((b - half) % 2 == 0);
        is_edge = a < band || b < band || a >= plus.n_eta - band || b >= plus.n_eta - band;
      }
      auto add = [&](cplx v) {
        const double mag = std::abs(v);
        if (mag == 0.0) return;
        const double lv = lw + q * std::log(mag);
        all.add(lv);
        shell.add(lv);
        if (is_even) even.add(lv + d * std::log(2.0));
        if (is_edge) edge.add(lv);
      };
      add(plus.g[mi][e]);
      add(minus.g[mi][e]);
      for (int j = 0; j < d; ++j) {
        add(plus.dg[mi][j][e]);
        add(minus.dg[mi][j][e]);
      }
    }
  }

  GResult r;
  r.log_value = all.log();
  if (r.log_value > kLogMax) throw DomainError("g_functional: weight overflow (log G = " + fmt_double(r.log_value) + ")");
  if (r.log_value == kNegInf) return r;
  r.value = std::exp(r.log_value);
  const double g2h = std::exp(even.log());
  r.quad_error = std::abs(r.value - g2h) / r.value;
  r.edge_fraction = std::exp(edge.log() - r.log_value);

  // Shell totals beyond the last occupied shell, extrapolated geometrically.
  if (shells.size() >= 2) {
    auto last = std::prev(shells.end());
    auto before = std::prev(last);
    const double ll = last->second.log(), lb = before->second.log();
    if (ll != kNegInf && lb != kNegInf) {
      const double ratio = std::exp(ll - lb);
      r.k_tail = ratio < 1.0 ? std::exp(ll - r.log_value) * ratio / (1.0 - ratio)
                             : std::numeric_limits<double>::infinity();
    }
  }
  if (r.quad_error > quad_tol)
    throw DomainError("g_functional: eta grid too coarse (quadrature estimate " + fmt_double(r.quad_error) + ")");
  return r;
}

double lambda_schedule(double t, const GevreyParams& p) {
  return p.lambda0 + p.lambda0 * std::pow(1.0 + t, -p.delta);
}

Ratio check_embedding(double f_val, double g_val, int dim) {
  if (g_val == 0.0) {
    if (f_val > 0.0) throw InvariantBreach("check_embedding: G vanishes while F > 0");
    return {0.0};
  }
  return {f_val / std::pow(g_val, 1.0 / (dim + 1.0))};
}

Fit fit_log_envelope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit: x/y size mismatch");
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > 0.0 && y[i] > y[i - 1] && y[i] >= y[i + 1]) idx.push_back(i);
  Fit fit;
  fit.envelope = idx.size() >= 4;
  if (!fit.envelope) {
    idx.clear();
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] > 0.0 && std::isfinite(y[i])) idx.push_back(i);
  }
  if (idx.size() < 4) throw DomainError("fit: fewer than 4 usable points");
  const double n = static_cast<double>(idx.size());
  double sx = 0, sy = 0;
  for (auto i : idx) {
    sx += x[i];
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto i : idx) {
    const double dx = x[i] - mx, dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("fit: degenerate abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double ss_res = std::max(0.0, syy - slope * sxy);
  fit.lambda_fit = slope == 0.0 ? 0.0 : -slope;
  fit.c_fit = std::exp(intercept);
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.points = idx.size();
  return fit;
}

Fit fit_decay(std::span<const double> t, std::span<const double> e_series, double t_lo, double t_hi) {
  if (t.size() != e_series.size()) throw DomainError("fit_decay: series size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo - 1e-12 || t[i] > t_hi + 1e-12) continue;
    x.push_back(std::sqrt(1.0 + t[i] * t[i]));
    y.push_back(e_series[i]);
  }
  return fit_log_envelope(x, y);
}

double comparison_constant(double sigma, double theta1) {
  if (!(sigma > 0.0) || !(theta1 > 0.0)) throw DomainError("comparison_constant: sigma and theta1 must be positive");
  // s <= t/2: (sigma/2) ln(1+t^2) - theta1 t / 8, maximized at the larger root of
  // theta1 t^2 - 8 sigma t + theta1 = 0.
  const double disc = std::sqrt(64.0 * sigma * sigma - 4.0 * theta1 * theta1);
  const double t_star = (8.0 * sigma + disc) / (2.0 * theta1);
  const double g1 = std::max(0.0, 0.5 * sigma * std::log1p(t_star * t_star) - theta1 * t_star / 8.0);
  // s > t/2: the bracket ratio is below (t/s)^2 < 4.
  const double g2 = sigma * std::log(2.0);
  return std::exp(std::max(g1, g2));
}

L41Report check_l41_inequality(std::span<const L41Snapshot> snaps, int dim, double noise_rel) {
  if (snaps.size() < 3) throw DomainError("check_l41_inequality: need at least 3 snapshots");
  for (std::size_t i = 1; i < snaps.size(); ++i)
    if (!(snaps[i].t > snaps[i - 1].t)) throw DomainError("check_l41_inequality: snapshot times must increase");
  L41Report rep;
  const double expo = dim / (dim + 1.0);
  for (std::size_t i = 1; i + 1 < snaps.size(); ++i) {
    const auto& s = snaps[i];
    if (!(s.dz > 0.0)) throw DomainError("check_l41_inequality: dz must be positive");
    const double dgdt = (snaps[i + 1].g - snaps[i - 1].g) / (snaps[i + 1].t - snaps[i - 1].t);
    const double dgdz = std::max(0.0, (s.g_zplus - s.g_zminus) / (2.0 * s.dz));
    const double r1 = s.f * std::pow(s.g, expo);
    const double r2 = (1.0 + s.t) * s.f * dgdz;
    const double num = dgdt > noise_rel * s.g ? dgdt : 0.0;
    double c = 0.0;
    if (num > 0.0) c = (r1 + r2) > 0.0 ? num / (r1 + r2) : std::numeric_limits<double>::infinity();
    rep.times.push_back(s.t);
    rep.dgdt.push_back(dgdt);
    rep.rhs_first.push_back(r1);
    rep.rhs_second.push_back(r2);
    rep.c_local.push_back(c);
    if (c > rep.c_min) {
      rep.c_min = c;
      rep.t_at_max = s.t;
    }
  }
  return rep;
}

}  // namespace landau::generators
