#include "landau/linear_theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "landau/parallel.hpp"
#include "landau/penrose.hpp"

namespace landau::linear {

namespace {

void lagrange4(double f, double w[4]) {
  w[0] = -f * (f - 1.0) * (f - 2.0) / 6.0;
  w[1] = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  w[2] = -(f + 1.0) * f * (f - 2.0) / 2.0;
  w[3] = (f + 1.0) * f * (f - 1.0) / 6.0;
}

void check_finite(const std::vector<cplx>& v, const char* what) {
  for (const auto& x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw DomainError(std::string(what) + ": NaN/inf encountered");
}

DensitySeries empty_like(const SourceSeries& src) {
  DensitySeries out;
  out.dim = src.dim;
  out.grid = src.grid;
  out.k_set = src.k_set;
  const std::size_t nk = src.k_set.size();
  out.rho_plus.resize(nk);
  out.rho_minus.resize(nk);
  out.rho.resize(nk);
  out.e_field.resize(nk);
  return out;
}

void finish_mode(DensitySeries& out, std::size_t i) {
  const std::size_t nt = out.rho_plus[i].size();
  out.rho[i].resize(nt);
  out.e_field[i].resize(nt);
  for (std::size_t n = 0; n < nt; ++n) {
    out.rho[i][n] = out.rho_plus[i][n] - out.rho_minus[i][n];
    out.e_field[i][n] = field_mode(out.k_set[i], out.rho[i][n]);
  }
}

std::vector<cplx> kernel_samples(const equilibria::Equilibrium& eq, const Mode& k, const TimeGrid& grid) {
  std::vector<cplx> kappa(grid.size());
  for (std::size_t n = 0; n < kappa.size(); ++n) {
    const double t = grid.t(n);
    kappa[n] = t * eq.mu_hat(scale(k, t));
  }
  return kappa;
}

void check_source(const SourceSeries& src) {
  if (src.s_plus.size() != src.k_set.size() || src.s_minus.size() != src.k_set.size())
    throw DomainError("source series: mode count mismatch");
  for (std::size_t i = 0; i < src.k_set.size(); ++i)
    if (src.s_plus[i].size() != src.grid.size() || src.s_minus[i].size() != src.grid.size())
      throw DomainError("source series: time samples do not match the uniform grid");
  for (const auto& k : src.k_set)
    if (is_zero(k)) throw DomainError("source series: k = 0 is not a density mode");
}

}  // namespace

cplx GriddedSpectrum::operator()(const Mode& k, const RVec& eta) const {
  auto it = std::find(modes.begin(), modes.end(), k);
  if (it == modes.end()) return 0.0;
  const auto& tab = values[static_cast<std::size_t>(it - modes.begin())];
  const double half = n_eta / 2;
  int base[2] = {0, 0};
  double w[2][4] = {{0, 1, 0, 0}, {0, 1, 0, 0}};
  for (int d = 0; d < dim; ++d) {
    const double u = eta[d] / deta + half;
    const double fl = std::floor(u);
    if (fl < 1.0 || fl + 2.0 > n_eta - 1.0) {
      std::ostringstream os;
      os << "gridded spectrum: eta=" << eta[d] << " outside the tabulated range";
      throw OutOfGrid(os.str());
    }
    base[d] = static_cast<int>(fl);
    lagrange4(u - fl, w[d]);
  }
  cplx acc = 0.0;
  if (dim == 1) {
    for (int a = 0; a < 4; ++a) acc += w[0][a] * tab[static_cast<std::size_t>(base[0] - 1 + a)];
    return acc;
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const std::size_t idx = static_cast<std::size_t>(base[0] - 1 + a) * n_eta + (base[1] - 1 + b);
      acc += w[0][a] * w[1][b] * tab[idx];
    }
  return acc;
}

SourceSeries build_source(const SpectrumFn& f0_plus, const SpectrumFn& f0_minus, const TimeGrid& grid,
                          const std::vector<Mode>& k_set, int dim) {
  SourceSeries src;
  src.dim = dim;
  src.grid = grid;
  src.k_set = k_set;
  src.s_plus.assign(k_set.size(), std::vector<cplx>(grid.size()));
  src.s_minus.assign(k_set.size(), std::vector<cplx>(grid.size()));
  for (std::size_t i = 0; i < k_set.size(); ++i) {
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const RVec eta = scale(k_set[i], grid.t(n));
      src.s_plus[i][n] = f0_plus ? f0_plus(k_set[i], eta) : 0.0;
      src.s_minus[i][n] = f0_minus ? f0_minus(k_set[i], eta) : 0.0;
    }
  }
  return src;
}

std::vector<cplx> trapezoid_convolution(std::span<const cplx> a, std::span<const cplx> b, double dt) {
  const std::size_t n_t = std::min(a.size(), b.size());
  std::vector<cplx> c(n_t, 0.0);
  for (std::size_t n = 1; n < n_t; ++n) {
    cplx acc = 0.5 * a[0] * b[n];
    for (std::size_t j = 1; j < n; ++j) acc += a[j] * b[n - j];
    acc += 0.5 * a[n] * b[0];
    c[n] = dt * acc;
  }
  return c;
}

DensitySeries solve_volterra(const SourceSeries& src, const equilibria::Equilibrium& eq, double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("solve_volterra: epsilon must be non-negative");
  check_source(src);
  DensitySeries out = empty_like(src);
  const double dt = src.grid.dt;
  parallel_for(src.k_set.size(), [&](std::size_t i) {
    const auto kappa = kernel_samples(eq, src.k_set[i], src.grid);
    const auto& sp = src.s_plus[i];
    const auto& sm = src.s_minus[i];
    const std::size_t nt = src.grid.size();
    std::vector<cplx> rp(nt), rm(nt), diff(nt);
    rp[0] = sp[0];
    rm[0] = sm[0];
    diff[0] = rp[0] - rm[0];
    for (std::size_t n = 1; n < nt; ++n) {
      // kappa[0] = 0, so the unknown diff[n] does not enter its own step.
      cplx acc = 0.5 * diff[0] * kappa[n];
      for (std::size_t j = 1; j < n; ++j) acc += diff[j] * kappa[n - j];
      const cplx conv = dt * acc;
      rp[n] = sp[n] - epsilon * conv;
      rm[n] = sm[n] + conv;
      diff[n] = rp[n] - rm[n];
    }
    check_finite(rp, "solve_volterra");
    check_finite(rm, "solve_volterra");
    out.rho_plus[i] = std::move(rp);
    out.rho_minus[i] = std::move(rm);
    finish_mode(out, i);
  });
  return out;
}

double volterra_residual(const DensitySeries& rho, const SourceSeries& src, const equilibria::Equilibrium& eq,
                         double epsilon) {
  double worst = 0.0, s_max = 0.0;
  for (std::size_t i = 0; i < src.k_set.size(); ++i) {
    const auto kappa = kernel_samples(eq, src.k_set[i], src.grid);
    std::vector<cplx> diff(src.grid.size());
    for (std::size_t n = 0; n < diff.size(); ++n) diff[n] = rho.rho_plus[i][n] - rho.rho_minus[i][n];
    const auto conv = trapezoid_convolution(diff, kappa, src.grid.dt);
    for (std::size_t n = 0; n < diff.size(); ++n) {
      worst = std::max(worst, std::abs(rho.rho_plus[i][n] + epsilon * conv[n] - src.s_plus[i][n]));
      worst = std::max(worst, std::abs(rho.rho_minus[i][n] - conv[n] - src.s_minus[i][n]));
      s_max = std::max({s_max, std::abs(src.s_plus[i][n]), std::abs(src.s_minus[i][n])});
    }
  }
  return s_max > 0.0 ? worst / s_max : worst;
}

cplx resolvent_symbol(const equilibria::Equilibrium& eq, double epsilon, const Mode& k, cplx lambda, double tol) {
  const cplx l = penrose::laplace_kernel(eq, k, lambda, tol);
  return l / (1.0 + (1.0 + epsilon) * l);
}

KernelSeries kernel_inverse_laplace(const equilibria::Equilibrium& eq, double epsilon, const Mode& k, double theta1,
                                    const TimeGrid& grid, const KernelOptions& opt) {
  if (is_zero(k)) throw DomainError("kernel_inverse_laplace: k must be nonzero");
  if (!(theta1 > 0.0 && theta1 < eq.theta0))
    throw DomainError("kernel_inverse_laplace: theta1 must lie in (0, theta0)");
  const double kn = norm(k);
  const double beta = 1.0 + epsilon;
  const double c = -theta1 * kn;
  const double shift = theta1 * kn + 1.0;

  // Large-lambda expansion K_tilde ~ A2/l^2 + A3/l^3 + A4/l^4 from
  // kappa(t) = t mu_hat(k t) = mu_hat(0) t + s1 t^2 + (s2/2) t^3 + ...
  const RVec origin{0.0, 0.0};
  const double a0 = eq.mu_hat(origin);
  const RVec g0 = eq.mu_hat_grad(origin);
  const double s1 = k[0] * g0[0] + k[1] * g0[1];
  const double h = 1e-4;
  const RVec gp = eq.mu_hat_grad(scale(k, h)), gm = eq.mu_hat_grad(scale(k, -h));
  const double s2 = ((k[0] * gp[0] + k[1] * gp[1]) - (k[0] * gm[0] + k[1] * gm[1])) / (2.0 * h);
  const double A2 = a0, A3 = 2.0 * s1, A4 = 3.0 * s2 - beta * a0 * a0;
  // Matching sum of (l + shift)^-n poles; analytic right of the contour.
  const double h2 = A2;
  const double h3 = A3 + 2.0 * shift * h2;
  const double h4 = A4 - 3.0 * shift * shift * h2 + 3.0 * shift * h3;
  auto asym_time = [&](double t) {
    return std::exp(-shift * t) * (h2 * t + h3 * t * t / 2.0 + h4 * t * t * t / 6.0);
  };
  auto asym_symbol = [&](cplx l) {
    const cplx u = 1.0 / (l + shift);
    return h2 * u * u + h3 * u * u * u + h4 * u * u * u * u;
  };

  double min_den = std::numeric_limits<double>::infinity();
  auto remainder = [&](double tau, double& den) {
    const cplx l(c, tau);
    const cplx lk = penrose::laplace_kernel(eq, k, l, 1e-13);
    const cplx d = 1.0 + beta * lk;
    den = std::abs(d);
    return lk / d - asym_symbol(l);
  };

  // Cutoff: remainder ~ tau^-5, tail of int_M^inf |R| d tau / pi ~ |R(M)| M / (4 pi).
  double cutoff = 40.0;
  for (;;) {
    double den;
    const double r = std::abs(remainder(cutoff, den));
    if (r * cutoff / (4.0 * kPi) <= 0.1 * opt.tol) break;
    cutoff *= 2.0;
    if (cutoff > opt.max_im)
      throw InvariantBreach("kernel_inverse_laplace: contour truncation cannot reach tol for k=" + to_string(k, eq.dim));
  }

  const std::size_t nt = grid.size();
  std::vector<double> previous;
  std::vector<cplx> coarse_vals;
  std::vector<double> coarse_dens;
  double period = 2.0 * (grid.t_max() + 10.0);
  KernelSeries ker;
  ker.grid = grid;
  ker.k = k;
  ker.epsilon = epsilon;
  ker.theta1 = theta1;
  ker.contour_re = c;
  ker.im_cutoff = cutoff;
  for (int level = 0; level < 8; ++level, period *= 2.0) {
    const double step = 2.0 * kPi / period;
    const std::size_t nj = static_cast<std::size_t>(std::ceil(cutoff / step)) + 1;
    // Halving the step keeps every previous node at an even index.
    std::vector<cplx> rvals(nj);
    std::vector<double> dens(nj);
    const bool reuse = !coarse_vals.empty();
    for (std::size_t j = 0; reuse && 2 * j < nj && j < coarse_vals.size(); ++j) {
      rvals[2 * j] = coarse_vals[j];
      dens[2 * j] = coarse_dens[j];
    }
    parallel_for(nj, [&](std::size_t j) {
      if (reuse && j % 2 == 0 && j / 2 < coarse_vals.size()) return;
      rvals[j] = remainder(static_cast<double>(j) * step, dens[j]);
    });
    for (double d : dens) min_den = std::min(min_den, d);
    if (min_den < opt.denominator_floor) {
      std::ostringstream os;
      os << "kernel_inverse_laplace: |1+(1+eps)L| = " << min_den << " below floor on the contour (Penrose violation)";
      throw InvariantBreach(os.str());
    }
    std::vector<double> values(nt);
    parallel_for(nt, [&](std::size_t n) {
      const double t = grid.t(n);
      double acc = 0.5 * rvals[0].real();
      for (std::size_t j = 1; j < nj; ++j) {
        const double ph = static_cast<double>(j) * step * t;
        acc += std::cos(ph) * rvals[j].real() - std::sin(ph) * rvals[j].imag();
      }
      values[n] = asym_time(t) + std::exp(c * t) / kPi * step * acc;
    });
    double change = std::numeric_limits<double>::infinity();
    if (!previous.empty()) {
      change = 0.0;
      for (std::size_t n = 0; n < nt; ++n) change = std::max(change, std::abs(values[n] - previous[n]));
    }
    previous = std::move(values);
    coarse_vals = std::move(rvals);
    coarse_dens = std::move(dens);
    ker.im_step = step;
    if (change <= opt.tol) break;
    if (level == 7)
      throw InvariantBreach("kernel_inverse_laplace: contour step refinement did not converge for k=" + to_string(k, eq.dim));
  }
  ker.min_denominator = min_den;
  ker.k_hat.assign(previous.begin(), previous.end());

  std::vector<double> x, y;
  for (std::size_t n = 0; n < nt; ++n) {
    const double t = grid.t(n);
    if (t < opt.fit_lo - 1e-12 || t > opt.fit_hi + 1e-12) continue;
    x.push_back(kn * t);
    y.push_back(std::abs(ker.k_hat[n]));
  }
  try {
    const auto fit = generators::fit_log_envelope(x, y);
    ker.fit_theta = fit.lambda_fit;
    ker.fit_c = fit.c_fit;
    ker.fit_r2 = fit.r2;
  } catch (const DomainError&) {
    // Identically zero (or too short) kernels carry no decay information.
    ker.fit_theta = std::numeric_limits<double>::infinity();
    ker.fit_c = 0.0;
  }
  return ker;
}

cplx forward_laplace(const KernelSeries& ker, cplx lambda) {
  const std::size_t n = ker.grid.steps;
  const double dt = ker.grid.dt;
  auto f = [&](std::size_t j) { return std::exp(-lambda * ker.grid.t(j)) * ker.k_hat[j]; };
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * dt * (f(0) + f(1));
  const std::size_t simpson_end = (n % 2 == 0) ? n : n - 3;
  cplx acc = 0.0;
  for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) acc += dt / 3.0 * (f(j) + 4.0 * f(j + 1) + f(j + 2));
  if (simpson_end != n)
    acc += 3.0 * dt / 8.0 * (f(n - 3) + 3.0 * f(n - 2) + 3.0 * f(n - 1) + f(n));
  return acc;
}

DensitySeries reconstruct_rho(const SourceSeries& src, const std::vector<KernelSeries>& kernels, double epsilon) {
  check_source(src);
  if (kernels.size() != src.k_set.size()) throw DomainError("reconstruct_rho: one kernel per mode required");
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    if (!(kernels[i].grid == src.grid) || kernels[i].k_hat.size() != src.grid.size())
      throw DomainError("reconstruct_rho: kernel and source time grids differ");
    if (kernels[i].k != src.k_set[i]) throw DomainError("reconstruct_rho: kernel mode does not match source mode");
  }
  DensitySeries out = empty_like(src);
  parallel_for(src.k_set.size(), [&](std::size_t i) {
    const auto s = src.total(i);
    const auto ks = trapezoid_convolution(kernels[i].k_hat, s, src.grid.dt);
    const std::size_t nt = src.grid.size();
    out.rho_plus[i].resize(nt);
    out.rho_minus[i].resize(nt);
    for (std::size_t n = 0; n < nt; ++n) {
      out.rho_plus[i][n] = src.s_plus[i][n] - epsilon * ks[n];
      out.rho_minus[i][n] = src.s_minus[i][n] + ks[n];
    }
    finish_mode(out, i);
  });
  return out;
}

FitReport verify_linear_gevrey(const DensitySeries& rho, const SourceSeries& src,
                               const generators::GevreyParams& params, double theta1, double z) {
  if (!(z >= 0.0 && z <= 0.5 * theta1)) throw DomainError("verify_linear_gevrey: z must lie in [0, theta1/2]");
  if (!(rho.grid == src.grid) || rho.k_set != src.k_set)
    throw DomainError("verify_linear_gevrey: density and source live on different grids");
  const std::size_t nt = src.grid.size();
  const double dt = src.grid.dt;
  FitReport rep;
  rep.f_rho.resize(nt);
  rep.f_source.resize(nt);
  rep.memory.resize(nt);
  std::vector<std::vector<cplx>> s_tot(src.k_set.size());
  for (std::size_t i = 0; i < src.k_set.size(); ++i) s_tot[i] = src.total(i);
  std::vector<cplx> snap(src.k_set.size());
  for (std::size_t n = 0; n < nt; ++n) {
    rep.f_rho[n] = generators::f_functional(rho, n, z, params).value;
    for (std::size_t i = 0; i < snap.size(); ++i) snap[i] = s_tot[i][n];
    rep.f_source[n] = generators::f_functional(src.k_set, snap, src.grid.t(n), z, params).value;
  }
  const double decay = std::exp(-0.25 * theta1 * dt);
  rep.memory[0] = 0.0;
  for (std::size_t n = 1; n < nt; ++n)
    rep.memory[n] = decay * rep.memory[n - 1] + 0.5 * dt * (decay * rep.f_source[n - 1] + rep.f_source[n]);
  for (std::size_t n = 0; n < nt; ++n) {
    const double excess = rep.f_rho[n] - rep.f_source[n];
    if (excess <= 1e-14 * std::max(rep.f_rho[n], rep.f_source[n])) continue;
    const double c = rep.memory[n] > 0.0 ? excess / rep.memory[n] : std::numeric_limits<double>::infinity();
    if (c > rep.c_fit) {
      rep.c_fit = c;
      rep.t_at_max = src.grid.t(n);
    }
  }
  rep.ok = std::isfinite(rep.c_fit);
  return rep;
}

}  // namespace landau::linear
