#include "landau/kinetic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "landau/parallel.hpp"

namespace landau::kinetic {

namespace {

int wrap(int k, int n) { return ((k % n) + n) % n; }
int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }

double gaussian_profile(const VelocityProfile& p, const RVec& v, int dim) {
  const double vt2 = p.thermal * p.thermal;
  RVec w{v[0] - p.drift[0], dim == 2 ? v[1] - p.drift[1] : 0.0};
  return std::pow(2.0 * kPi * vt2, -0.5 * dim) * std::exp(-dot(w, w) / (2.0 * vt2));
}

cplx profile_transform(const VelocityProfile& p, const RVec& eta, int dim) {
  const RVec u{p.drift[0], dim == 2 ? p.drift[1] : 0.0};
  return std::polar(std::exp(-0.5 * p.thermal * p.thermal * dot(eta, eta)), -dot(eta, u));
}

// Multiplier of the Fourier coefficient at mode q contributed by cos(k.x + phase).
cplx cos_coefficient(const Mode& k, double phase, const Mode& q) {
  if (is_zero(k)) return is_zero(q) ? cplx(std::cos(phase), 0.0) : cplx(0.0);
  cplx c(0.0);
  if (q == k) c += 0.5 * std::polar(1.0, phase);
  if (q == Mode{-k[0], -k[1]}) c += 0.5 * std::polar(1.0, -phase);
  return c;
}

// Sum_j exp(-i xi v_j) over one periodic v-axis, divided by n.
cplx dirichlet(double xi, int n, double dv) {
  const double a = 0.5 * xi * dv;
  const double s = std::sin(a);
  double ratio;
  if (std::abs(s) < 1e-13)
    ratio = n * std::cos(n * a) / std::cos(a);
  else
    ratio = std::sin(n * a) / s;
  return std::polar(ratio / n, a);
}

const SimConfig& validated(const SimConfig& cfg) {
  if (auto v = cfg.violations(); !v.empty()) {
    std::string msg = "invalid SimConfig:";
    for (const auto& s : v) msg += " " + s + ";";
    throw DomainError(msg);
  }
  return cfg;
}

}  // namespace

std::vector<std::string> SimConfig::violations() const {
  std::vector<std::string> out;
  auto bad = [&](bool cond, const std::string& msg) {
    if (cond) out.push_back(msg);
  };
  bad(dim != 1 && dim != 2, "dim must be 1 or 2");
  bad(!(epsilon >= 0.0), "epsilon must be non-negative");
  bad(n_x < 4 || n_x % 2 != 0, "n_x must be even and at least 4");
  bad(n_v < 8 || n_v % 2 != 0, "n_v must be even and at least 8");
  bad(dim == 2 && (n_x > 32 || n_v > 64), "d=2 runs are limited to n_x <= 32, n_v <= 64");
  bad(!(v_max > 0.0), "v_max must be positive");
  bad(!(dt > 0.0), "dt must be positive");
  bad(!(t_max >= 0.0), "t_max must be non-negative");
  bad(!(boundary_tol > 0.0), "boundary_tol must be positive");
  bad(!(spectral_floor >= 0.0 && spectral_floor < 1.0), "spectral_floor must lie in [0,1)");
  if (n_x >= 4 && v_max > 0.0 && dt > 0.0)
    bad(dt * v_max * (n_x / 3) > cfl_transport, "dt * v_max * K exceeds cfl_transport");
  return out;
}

Lattice::Lattice(int dim, int n_x, int n_v, double v_max)
    : dim_(dim), n_x_(n_x), n_v_(n_v), v_max_(v_max), k_cut_(n_x / 3), dv_(2.0 * v_max / n_v) {
  nx_total_ = dim == 1 ? n_x : static_cast<std::size_t>(n_x) * n_x;
  nv_total_ = dim == 1 ? n_v : static_cast<std::size_t>(n_v) * n_v;
  for (std::size_t s = 0; s < nx_total_; ++s)
    if (retained(s)) {
      modes_.push_back(mode(s));
      mode_slots_.push_back(s);
    }
}

Mode Lattice::mode(std::size_t x_index) const {
  if (dim_ == 1) return {signed_index(static_cast<int>(x_index), n_x_), 0};
  return {signed_index(static_cast<int>(x_index / n_x_), n_x_), signed_index(static_cast<int>(x_index % n_x_), n_x_)};
}

std::size_t Lattice::slot(const Mode& k) const {
  const int half = n_x_ / 2;
  if (k[0] < -half || k[0] >= half) return npos;
  if (dim_ == 1) return k[1] == 0 ? static_cast<std::size_t>(wrap(k[0], n_x_)) : npos;
  if (k[1] < -half || k[1] >= half) return npos;
  return static_cast<std::size_t>(wrap(k[0], n_x_)) * n_x_ + wrap(k[1], n_x_);
}

bool Lattice::retained(std::size_t x_index) const {
  const Mode k = mode(x_index);
  return std::abs(k[0]) <= k_cut_ && std::abs(k[1]) <= k_cut_;
}

RVec Lattice::v(std::size_t v_index) const {
  if (dim_ == 1) return {-v_max_ + static_cast<double>(v_index) * dv_, 0.0};
  return {-v_max_ + static_cast<double>(v_index / n_v_) * dv_, -v_max_ + static_cast<double>(v_index % n_v_) * dv_};
}

RVec Lattice::eta(std::size_t v_index) const {
  const double de = deta();
  if (dim_ == 1) return {signed_index(static_cast<int>(v_index), n_v_) * de, 0.0};
  return {signed_index(static_cast<int>(v_index / n_v_), n_v_) * de,
          signed_index(static_cast<int>(v_index % n_v_), n_v_) * de};
}

linear::SpectrumFn seed_spectrum(const SeedSpec& seed, Species s, int dim) {
  SeedSpec mine;
  for (const auto& term : seed)
    if (term.species == s) mine.push_back(term);
  const double box = std::pow(2.0 * kPi, dim);
  return [mine, dim, box](const Mode& q, const RVec& eta) {
    cplx acc(0.0);
    for (const auto& term : mine) {
      const cplx c = cos_coefficient(term.k, term.phase, q);
      if (c != 0.0) acc += term.amplitude * box * c * profile_transform(term.profile, eta, dim);
    }
    return acc;
  };
}

std::vector<std::array<cplx, 2>> field_from_density(const std::vector<Mode>& modes, const std::vector<cplx>& rho,
                                                    double neutral_tol) {
  if (modes.size() != rho.size()) throw DomainError("field_from_density: mode/density size mismatch");
  std::vector<std::array<cplx, 2>> e(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (is_zero(modes[i])) {
      if (!(std::abs(rho[i]) <= neutral_tol)) {
        std::ostringstream os;
        os << "neutrality broken: |rho_hat(0)| = " << std::abs(rho[i]);
        throw InvariantBreach(os.str());
      }
      e[i] = {cplx(0.0), cplx(0.0)};
      continue;
    }
    e[i] = field_mode(modes[i], rho[i]);
  }
  return e;
}

cplx interpolate(const generators::GlidingSpectrum& spec, std::size_t mode, const RVec& eta, double v_max) {
  const int n = spec.n_eta;
  const double dv = 2.0 * v_max / n;
  const auto& g = spec.g.at(mode);
  std::vector<cplx> d0(n), d1(spec.dim == 2 ? n : 0);
  for (int m = 0; m < n; ++m) {
    const double em = (m - n / 2) * spec.deta;
    d0[m] = dirichlet(eta[0] - em, n, dv);
    if (spec.dim == 2) d1[m] = dirichlet(eta[1] - em, n, dv);
  }
  cplx acc(0.0);
  if (spec.dim == 1) {
    for (int m = 0; m < n; ++m) acc += g[m] * d0[m];
  } else {
    for (int a = 0; a < n; ++a) {
      cplx row(0.0);
      for (int b = 0; b < n; ++b) row += g[static_cast<std::size_t>(a) * n + b] * d1[b];
      acc += d0[a] * row;
    }
  }
  return acc;
}

struct Solver::Impl {
  equilibria::Equilibrium eq;
  detail::BatchFft x_fwd, x_bwd, v_fwd, v_bwd, e_bwd, v_modes;
  std::vector<cplx> half_phase;  // [slot * nv + j], retained slots only
  std::vector<cplx> mu_dft;      // DFT of mu on the v-grid, from mu_hat

  Impl(const Lattice& L, const equilibria::Equilibrium& e)
      : eq(e),
        x_fwd(dims(L.dim(), L.n_x()), static_cast<int>(L.nv_total()), static_cast<int>(L.nv_total()), 1, FFTW_FORWARD),
        x_bwd(dims(L.dim(), L.n_x()), static_cast<int>(L.nv_total()), static_cast<int>(L.nv_total()), 1, FFTW_BACKWARD),
        v_fwd(dims(L.dim(), L.n_v()), static_cast<int>(L.nx_total()), 1, static_cast<int>(L.nv_total()), FFTW_FORWARD),
        v_bwd(dims(L.dim(), L.n_v()), static_cast<int>(L.nx_total()), 1, static_cast<int>(L.nv_total()), FFTW_BACKWARD),
        e_bwd(dims(L.dim(), L.n_x()), 1, 1, 1, FFTW_BACKWARD),
        v_modes(dims(L.dim(), L.n_v()), static_cast<int>(L.modes().size()), 1, static_cast<int>(L.nv_total()),
                FFTW_FORWARD) {}

  static std::vector<int> dims(int d, int n) { return std::vector<int>(static_cast<std::size_t>(d), n); }
};

Solver::Solver(const SimConfig& cfg, const equilibria::Equilibrium& eq)
    : cfg_(validated(cfg)), lattice_(cfg.dim, cfg.n_x, cfg.n_v, cfg.v_max) {
  if (eq.dim != cfg.dim) throw DomainError("equilibrium dimension does not match SimConfig.dim");
  impl_ = std::make_unique<Impl>(lattice_, eq);

  const auto& L = lattice_;
  const std::size_t nv = L.nv_total();
  impl_->half_phase.assign(L.size(), cplx(0.0));
  for (std::size_t s : L.mode_slots()) {
    const Mode k = L.mode(s);
    for (std::size_t j = 0; j < nv; ++j)
      impl_->half_phase[s * nv + j] = std::polar(1.0, -dot(k, L.v(j)) * 0.5 * cfg_.dt);
  }
  impl_->mu_dft.resize(nv);
  const double dvd = std::pow(L.dv(), L.dim());
  for (std::size_t m = 0; m < nv; ++m) {
    const RVec eta = L.eta(m);
    int parity;
    if (L.dim() == 1)
      parity = signed_index(static_cast<int>(m), L.n_v());
    else
      parity = signed_index(static_cast<int>(m / L.n_v()), L.n_v()) + signed_index(static_cast<int>(m % L.n_v()), L.n_v());
    const double sign = (std::abs(parity) % 2 == 0) ? 1.0 : -1.0;
    impl_->mu_dft[m] = sign * eq.mu_hat(eta) / dvd;
  }
}

Solver::~Solver() = default;

InitReport Solver::init_state(const SeedSpec& seed, const generators::GevreyParams& params) const {
  const auto& L = lattice_;
  const int d = L.dim();
  const std::size_t nv = L.nv_total();
  const double box = std::pow(2.0 * kPi, d);
  InitReport out;
  out.state.f_plus.assign(L.size(), cplx(0.0));
  out.state.f_minus.assign(L.size(), cplx(0.0));
  for (const auto& term : seed) {
    if (d == 1 && term.k[1] != 0) throw DomainError("seed mode " + to_string(term.k, 2) + " has a second component in d=1");
    const Mode neg{-term.k[0], -term.k[1]};
    const std::size_t sp = L.slot(term.k), sn = L.slot(neg);
    if (sp == Lattice::npos || sn == Lattice::npos || !L.retained(sp))
      throw DomainError("seed mode " + to_string(term.k, d) + " lies outside the retained set |k_i| <= " +
                        std::to_string(L.k_cut()));
    if (!(term.profile.thermal > 0.0)) throw DomainError("seed profile thermal speed must be positive");
    auto& f = term.species == Species::plus ? out.state.f_plus : out.state.f_minus;
    std::vector<std::size_t> slots{sp};
    if (sn != sp) slots.push_back(sn);
    for (std::size_t s : slots) {
      const cplx c = term.amplitude * box * cos_coefficient(term.k, term.phase, L.mode(s));
      if (c == 0.0) continue;
      for (std::size_t j = 0; j < nv; ++j) f[s * nv + j] += c * gaussian_profile(term.profile, L.v(j), d);
    }
  }
  const auto rho_p = density(out.state, Species::plus);
  const auto rho_m = density(out.state, Species::minus);
  const std::size_t zero = std::find(L.modes().begin(), L.modes().end(), Mode{0, 0}) - L.modes().begin();
  out.net_charge = (rho_p[zero] - rho_m[zero]).real();
  if (std::abs(out.net_charge) > 1e-12) {
    std::ostringstream os;
    os << "seed violates neutrality: net charge " << out.net_charge;
    throw DomainError(os.str());
  }
  const auto frame = gliding_frame(out.state);
  out.g_initial = generators::g_functional(frame.plus, frame.minus, params.lambda1, params).value;
  return out;
}

void Solver::transport(SpectralState& state) const {
  const std::size_t nv = lattice_.nv_total();
  const auto& ph = impl_->half_phase;
  parallel_for(lattice_.mode_slots().size(), [&](std::size_t i) {
    const std::size_t base = lattice_.mode_slots()[i] * nv;
    for (std::size_t j = 0; j < nv; ++j) {
      state.f_plus[base + j] *= ph[base + j];
      state.f_minus[base + j] *= ph[base + j];
    }
  });
}

void Solver::accelerate(std::vector<cplx>& f, const std::vector<double>& ax, const std::vector<double>& ay) const {
  const auto& L = lattice_;
  const int d = L.dim();
  const int n = L.n_v();
  const std::size_t nx = L.nx_total(), nv = L.nv_total();
  const double inv_box = std::pow(2.0 * kPi, -d);
  const double to_hat = std::pow(2.0 * kPi / L.n_x(), d);
  const double inv_nv = 1.0 / static_cast<double>(nv);

  impl_->x_bwd.execute(f.data());
  for (auto& c : f) c = cplx(c.real() * inv_box, 0.0);
  impl_->v_fwd.execute(f.data());

  const double de = L.deta();
  parallel_for(nx, [&](std::size_t x) {
    const double s0 = ax[x] * cfg_.dt;
    const double s1 = d == 2 ? ay[x] * cfg_.dt : 0.0;
    // Per-axis factors p = e^{-i eta s} and q = p - 1; the Nyquist column uses cos.
    std::vector<cplx> p0(n), q0(n), p1(d == 2 ? n : 0), q1(d == 2 ? n : 0);
    auto fill = [&](std::vector<cplx>& p, std::vector<cplx>& q, double shift) {
      for (int m = 0; m < n; ++m) {
        const int mi = signed_index(m, n);
        const double th = mi * de * shift;
        const double h = std::sin(0.5 * th);
        const bool nyq = mi == -n / 2;
        p[m] = nyq ? cplx(std::cos(th), 0.0) : std::polar(1.0, -th);
        q[m] = cplx(-2.0 * h * h, nyq ? 0.0 : -std::sin(th));
      }
    };
    fill(p0, q0, s0);
    if (d == 2) fill(p1, q1, s1);
    cplx* row = f.data() + x * nv;
    for (std::size_t m = 0; m < nv; ++m) {
      cplx ph, ph_m1;
      if (d == 1) {
        ph = p0[m];
        ph_m1 = q0[m];
      } else {
        const cplx a = q0[m / n], b = q1[m % n];
        ph = p0[m / n] * p1[m % n];
        ph_m1 = a * b + a + b;
      }
      row[m] = ph * row[m] + ph_m1 * impl_->mu_dft[m];
    }
  });

  impl_->v_bwd.execute(f.data());
  for (auto& c : f) c = cplx(c.real() * inv_nv, 0.0);
  impl_->x_fwd.execute(f.data());
  for (std::size_t x = 0; x < nx; ++x) {
    cplx* row = f.data() + x * nv;
    if (!L.retained(x)) {
      std::fill(row, row + nv, cplx(0.0));
      continue;
    }
    for (std::size_t j = 0; j < nv; ++j) row[j] *= to_hat;
  }
}

void Solver::step(SpectralState& state) const {
  const auto& L = lattice_;
  if (state.f_plus.size() != L.size() || state.f_minus.size() != L.size())
    throw DomainError("step: state does not match the lattice");
  transport(state);
  if (!cfg_.zero_field) {
    const auto e_hat = field_from_density(L.modes(), charge(state));
    const std::size_t nx = L.nx_total();
    const double inv_box = std::pow(2.0 * kPi, -L.dim());
    std::array<std::vector<double>, 2> e_x;
    double e_max = 0.0;
    for (int c = 0; c < L.dim(); ++c) {
      std::vector<cplx> buf(nx, cplx(0.0));
      for (std::size_t i = 0; i < L.modes().size(); ++i) buf[L.mode_slots()[i]] = e_hat[i][c];
      impl_->e_bwd.execute(buf.data());
      e_x[c].resize(nx);
      for (std::size_t x = 0; x < nx; ++x) {
        e_x[c][x] = buf[x].real() * inv_box;
        e_max = std::max(e_max, std::abs(e_x[c][x]));
      }
    }
    if (L.dim() == 1) e_x[1].assign(nx, 0.0);
    const double a_max = e_max * std::max(cfg_.epsilon, 1.0);
    if (cfg_.dt * a_max * kPi * L.n_v() / (2.0 * L.v_max()) > cfg_.cfl_accel) {
      std::ostringstream os;
      os << "acceleration CFL exceeded at t=" << state.t << " (max|E|=" << e_max << ")";
      throw InvariantBreach(os.str());
    }
    std::array<std::vector<double>, 2> a_plus, a_minus;
    for (int c = 0; c < 2; ++c) {
      a_plus[c].resize(nx);
      a_minus[c].resize(nx);
      for (std::size_t x = 0; x < nx; ++x) {
        a_plus[c][x] = cfg_.epsilon * e_x[c][x];
        a_minus[c][x] = -e_x[c][x];
      }
    }
    accelerate(state.f_plus, a_plus[0], a_plus[1]);
    accelerate(state.f_minus, a_minus[0], a_minus[1]);
  }
  transport(state);
  state.t += cfg_.dt;

  const double frac = diagnostics(state).boundary_fraction;
  if (frac > cfg_.boundary_tol) {
    std::ostringstream os;
    os << "velocity box too small: boundary mass fraction " << frac << " at t=" << state.t;
    throw InvariantBreach(os.str());
  }
}

std::vector<cplx> Solver::density(const SpectralState& state, Species s) const {
  const auto& L = lattice_;
  const auto& f = s == Species::plus ? state.f_plus : state.f_minus;
  const std::size_t nv = L.nv_total();
  const double dvd = std::pow(L.dv(), L.dim());
  std::vector<cplx> rho(L.modes().size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const std::size_t base = L.mode_slots()[i] * nv;
    cplx acc(0.0);
    for (std::size_t j = 0; j < nv; ++j) acc += f[base + j];
    rho[i] = acc * dvd;
  }
  return rho;
}

std::vector<cplx> Solver::charge(const SpectralState& state) const {
  auto rho = density(state, Species::plus);
  const auto rm = density(state, Species::minus);
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] -= rm[i];
  return rho;
}

generators::GlidingSpectrum Solver::frame_of(const std::vector<cplx>& f, double t) const {
  const auto& L = lattice_;
  const int d = L.dim();
  const int n = L.n_v();
  const std::size_t nv = L.nv_total();
  const std::size_t nm = L.modes().size();
  const double dvd = std::pow(L.dv(), d);

  double gmax = 0.0;
  std::vector<double> content(nm, 0.0);
  for (std::size_t i = 0; i < nm; ++i) {
    const std::size_t base = L.mode_slots()[i] * nv;
    for (std::size_t j = 0; j < nv; ++j) content[i] = std::max(content[i], std::abs(f[base + j]));
    gmax = std::max(gmax, content[i]);
  }
  for (std::size_t i = 0; i < nm; ++i) {
    const Mode& k = L.modes()[i];
    if (content[i] <= cfg_.alias_tol * gmax || content[i] == 0.0) continue;
    const double shear = std::max(std::abs(k[0]), std::abs(k[1])) * t;
    if (shear >= L.eta_nyquist()) {
      std::ostringstream os;
      os << "aliasing: mode " << to_string(k, d) << " sheared to |k|t=" << shear << " past eta Nyquist "
         << L.eta_nyquist() << " at t=" << t;
      throw InvariantBreach(os.str());
    }
  }

  // Buffers: g, then (-i v_c) g per direction.
  std::vector<std::vector<cplx>> buf(1 + d, std::vector<cplx>(nm * nv));
  for (std::size_t i = 0; i < nm; ++i) {
    const Mode& k = L.modes()[i];
    const std::size_t src = L.mode_slots()[i] * nv;
    for (std::size_t j = 0; j < nv; ++j) {
      const RVec v = L.v(j);
      const cplx g = f[src + j] * std::polar(1.0, dot(k, v) * t);
      buf[0][i * nv + j] = g;
      buf[1][i * nv + j] = cplx(0.0, -v[0]) * g;
      if (d == 2) buf[2][i * nv + j] = cplx(0.0, -v[1]) * g;
    }
  }
  for (auto& b : buf) impl_->v_modes.execute(b.data());

  generators::GlidingSpectrum out;
  out.dim = d;
  out.n_eta = n;
  out.deta = L.deta();
  out.modes = L.modes();
  out.g.assign(nm, std::vector<cplx>(nv));
  out.dg.resize(nm);
  for (auto& dg : out.dg)
    for (int c = 0; c < 2; ++c) dg[c].assign(c < d ? nv : 0, cplx(0.0));
  const int half = n / 2;
  for (std::size_t flat = 0; flat < nv; ++flat) {
    std::size_t m;
    int parity;
    if (d == 1) {
      const int mc = static_cast<int>(flat) - half;
      m = static_cast<std::size_t>(wrap(mc, n));
      parity = mc;
    } else {
      const int a = static_cast<int>(flat / n) - half, b = static_cast<int>(flat % n) - half;
      m = static_cast<std::size_t>(wrap(a, n)) * n + wrap(b, n);
      parity = a + b;
    }
    const double scale = (std::abs(parity) % 2 == 0 ? 1.0 : -1.0) * dvd;
    for (std::size_t i = 0; i < nm; ++i) {
      out.g[i][flat] = scale * buf[0][i * nv + m];
      for (int c = 0; c < d; ++c) out.dg[i][c][flat] = scale * buf[1 + c][i * nv + m];
    }
  }
  if (cfg_.spectral_floor > 0.0) {
    auto clip = [&](auto&& get) {
      double top = 0.0;
      for (std::size_t i = 0; i < nm; ++i)
        for (const cplx& c : get(i)) top = std::max(top, std::abs(c));
      const double cut = cfg_.spectral_floor * top;
      for (std::size_t i = 0; i < nm; ++i)
        for (cplx& c : get(i))
          if (std::abs(c) <= cut) c = 0.0;
    };
    clip([&](std::size_t i) -> std::vector<cplx>& { return out.g[i]; });
    for (int c = 0; c < d; ++c) clip([&](std::size_t i) -> std::vector<cplx>& { return out.dg[i][c]; });
  }
  return out;
}

Solver::Gliding Solver::gliding_frame(const SpectralState& state) const {
  return {frame_of(state.f_plus, state.t), frame_of(state.f_minus, state.t)};
}

Diagnostics Solver::diagnostics(const SpectralState& state) const {
  const auto& L = lattice_;
  const std::size_t nv = L.nv_total();
  Diagnostics out;
  out.t = state.t;
  const auto rp = density(state, Species::plus);
  const auto rm = density(state, Species::minus);
  const std::size_t zero = std::find(L.modes().begin(), L.modes().end(), Mode{0, 0}) - L.modes().begin();
  out.mass_plus = rp[zero].real();
  out.mass_minus = rm[zero].real();
  out.neutrality = std::abs(rp[zero] - rm[zero]);

  double total = 0.0, edge = 0.0;
  const int n = L.n_v();
  auto on_edge = [&](std::size_t j) {
    auto near = [&](int i) { return i < 2 || i >= n - 2; };
    if (L.dim() == 1) return near(static_cast<int>(j));
    return near(static_cast<int>(j / n)) || near(static_cast<int>(j % n));
  };
  for (std::size_t i = 0; i < L.modes().size(); ++i) {
    const Mode& k = L.modes()[i];
    const std::size_t s = L.mode_slots()[i], sn = L.slot({-k[0], -k[1]});
    for (std::size_t j = 0; j < nv; ++j) {
      for (const auto* f : {&state.f_plus, &state.f_minus}) {
        const double a = std::abs((*f)[s * nv + j]);
        total += a;
        if (on_edge(j)) edge += a;
        out.reality_defect = std::max(out.reality_defect, std::abs((*f)[sn * nv + j] - std::conj((*f)[s * nv + j])));
      }
    }
  }
  out.boundary_fraction = total > 0.0 ? edge / total : 0.0;
  return out;
}

}  // namespace landau::kinetic
