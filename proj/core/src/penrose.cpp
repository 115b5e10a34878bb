#include "landau/penrose.hpp"

#include <cmath>
#include <limits>

#include "landau/parallel.hpp"
#include "landau/quadrature.hpp"

namespace landau::penrose {

namespace {

double truncation_time(double c_mu, double rate, double tol) {
  // Smallest T (on a doubling/bisection search) with c_mu e^{-rT}(T/r + 1/r^2) < tol/10.
  auto tail = [&](double T) { return c_mu * std::exp(-rate * T) * (T / rate + 1.0 / (rate * rate)); };
  const double target = 0.1 * tol;
  double hi = 1.0 / rate;
  while (tail(hi) >= target) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (tail(mid) >= target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

cplx laplace_kernel(const equilibria::Equilibrium& eq, const Mode& k, cplx lambda, double tol) {
  if (is_zero(k)) throw DomainError("dispersion: k must be nonzero");
  const double kn = norm(k);
  const double rate = eq.theta0 * kn + lambda.real();
  if (!(rate > 0.0)) throw DomainError("dispersion: Re(lambda) must exceed -theta0 |k|");
  if (eq.c_mu <= 0.0) return 0.0;
  const double T = truncation_time(eq.c_mu, rate, tol);
  auto f = [&](double t) { return std::exp(-lambda * t) * (t * eq.mu_hat(scale(k, t))); };
  return quad::integrate(f, 0.0, T, tol).value;
}

cplx dispersion(const equilibria::Equilibrium& eq, const DispersionQuery& q, double tol) {
  return 1.0 + (1.0 + q.alpha) * laplace_kernel(eq, q.k, q.lambda, tol);
}

std::vector<Mode> scan_modes(int dim, int k_max) {
  std::vector<Mode> modes;
  if (dim == 1) {
    for (int k = 1; k <= k_max; ++k) modes.push_back({k, 0});
    return modes;
  }
  for (int a = -k_max; a <= k_max; ++a)
    for (int b = -k_max; b <= k_max; ++b) {
      if (a == 0 && b == 0) continue;
      if (a * a + b * b > k_max * k_max) continue;
      modes.push_back({a, b});
    }
  return modes;
}

PenroseReport penrose_infimum(const equilibria::Equilibrium& eq, const ScanOptions& opt) {
  if (opt.k_max < 1) throw DomainError("penrose_infimum: k_max must be >= 1");
  if (!(opt.im_max > 0.0) || !(opt.step > 0.0)) throw DomainError("penrose_infimum: im_max and step must be positive");

  const auto modes = scan_modes(eq.dim, opt.k_max);
  const long n_tau = static_cast<long>(std::floor(opt.im_max / opt.step + 1e-9));
  const std::size_t per_mode = static_cast<std::size_t>(2 * n_tau + 1);
  std::vector<Sample> samples(modes.size() * per_mode);

  parallel_for(samples.size(), [&](std::size_t idx) {
    const Mode& k = modes[idx / per_mode];
    const long j = static_cast<long>(idx % per_mode) - n_tau;
    const double tau = j * opt.step;
    cplx d = dispersion(eq, {k, cplx(0.0, tau), opt.alpha}, opt.tol);
    samples[idx] = {k, tau, std::abs(d)};
  });

  PenroseReport rep;
  rep.inf_modulus = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (!std::isfinite(s.abs_d)) throw InvariantBreach("penrose scan produced a non-finite |D| at k=" + to_string(s.k, eq.dim));
    if (s.abs_d < rep.inf_modulus) {
      rep.inf_modulus = s.abs_d;
      rep.argmin_k = s.k;
      rep.argmin_lambda = cplx(0.0, s.im_lambda);
    }
  }
  rep.boundary_radius = opt.im_max;

  // |D - 1| <= (1+alpha) c_mu / (theta0 |k|)^2 for every Re lambda >= 0.
  const double amp = (1.0 + opt.alpha) * eq.c_mu;
  const double th = eq.theta0;
  rep.mode_tail_bound = amp / (th * th * (opt.k_max + 1.0) * (opt.k_max + 1.0));
  // Two integrations by parts on the boundary: |L(i tau)| <= (c_mu + 2 c_mu/theta0 + c_mu/theta0^2) / tau^2.
  rep.freq_tail_bound = amp * (1.0 + 2.0 / th + 1.0 / (th * th)) / (opt.im_max * opt.im_max);
  rep.tail_bound = std::max(rep.mode_tail_bound, rep.freq_tail_bound);
  rep.kappa_half_ok = rep.inf_modulus >= 0.5 * opt.kappa0 && (1.0 - rep.tail_bound) >= 0.5 * opt.kappa0;
  rep.alpha0 = eq.c_mu > 0.0 ? alpha_threshold(opt.kappa0, eq.c_mu, eq.theta0) : std::numeric_limits<double>::infinity();

  if (opt.interior_check) {
    // Coarse interior sweep: Re lambda in {0.25, 0.5, 1, 2}, |Im| <= M at 20x the step.
    const double res[] = {0.25, 0.5, 1.0, 2.0};
    const double coarse = 20.0 * opt.step;
    const long n_c = static_cast<long>(std::floor(opt.im_max / coarse));
    const std::size_t per = static_cast<std::size_t>(2 * n_c + 1) * 4;
    std::vector<double> vals(modes.size() * per);
    parallel_for(vals.size(), [&](std::size_t idx) {
      const Mode& k = modes[idx / per];
      std::size_t r = idx % per;
      double re = res[r % 4];
      double tau = (static_cast<long>(r / 4) - n_c) * coarse;
      vals[idx] = std::abs(dispersion(eq, {k, cplx(re, tau), opt.alpha}, opt.tol));
    });
    for (double v : vals)
      if (v < rep.inf_modulus) rep.interior_flag = true;
  }
  if (opt.keep_samples) rep.samples = std::move(samples);
  return rep;
}

double alpha_threshold(double kappa0, double c_mu, double theta0) {
  if (!(kappa0 > 0.0) || !(c_mu > 0.0) || !(theta0 > 0.0))
    throw DomainError("alpha_threshold: all inputs must be positive");
  return kappa0 * theta0 * theta0 / (2.0 * c_mu);
}

}  // namespace landau::penrose
