#include "landau/equilibria.hpp"

#include <cmath>
#include <limits>

namespace landau::equilibria {

double Equilibrium::derivative_sum(const RVec& eta) const {
  RVec g = mu_hat_grad(eta);
  return std::abs(mu_hat(eta)) + std::abs(g[0]) + std::abs(g[1]) + mu_hat_hess_norm(eta);
}

Equilibrium gaussian_equilibrium(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("gaussian_equilibrium: unsupported dimension " + std::to_string(dim));
  Equilibrium eq;
  eq.name = "gaussian";
  eq.dim = dim;
  eq.mu_hat = [](const RVec& e) { return std::exp(-0.5 * dot(e, e)); };
  eq.mu_hat_grad = [](const RVec& e) {
    double m = std::exp(-0.5 * dot(e, e));
    return RVec{-e[0] * m, -e[1] * m};
  };
  eq.mu_hat_hess_norm = [dim](const RVec& e) {
    double m = std::exp(-0.5 * dot(e, e));
    double s = std::abs(e[0] * e[0] - 1.0) * m;
    if (dim == 2) s += std::abs(e[1] * e[1] - 1.0) * m + std::abs(e[0] * e[1]) * m;
    return s;
  };
  CertGrid grid;
  if (dim == 2) grid.step = 0.05;
  CertReport rep = certify_h1(eq, kDefaultTheta0, grid);
  eq.c_mu = rep.c_mu;
  eq.theta0 = kDefaultTheta0;
  return eq;
}

Equilibrium zero_equilibrium(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("zero_equilibrium: unsupported dimension " + std::to_string(dim));
  Equilibrium eq;
  eq.name = "zero";
  eq.dim = dim;
  eq.mu_hat = [](const RVec&) { return 0.0; };
  eq.mu_hat_grad = [](const RVec&) { return RVec{0.0, 0.0}; };
  eq.mu_hat_hess_norm = [](const RVec&) { return 0.0; };
  eq.c_mu = 0.0;
  eq.theta0 = kDefaultTheta0;
  return eq;
}

CertReport certify_h1(const Equilibrium& eq, double theta0, const CertGrid& grid) {
  if (!(theta0 >= 0.0)) throw DomainError("certify_h1: theta0 must be non-negative");
  if (!(grid.radius > 0.0) || !(grid.step > 0.0)) throw DomainError("certify_h1: grid radius and step must be positive");
  const long n = static_cast<long>(std::llround(grid.radius / grid.step));
  CertReport rep;
  auto weighted = [&](const RVec& eta) {
    double s = eq.derivative_sum(eta);
    if (!std::isfinite(s)) throw DomainError("certify_h1: non-finite mu_hat derivatives on grid");
    return std::exp(theta0 * norm(eta)) * s;
  };
  auto visit = [&](const RVec& eta) {
    double w = weighted(eta);
    if (w > rep.c_mu) {
      rep.c_mu = w;
      rep.worst_eta = eta;
    }
  };
  if (eq.dim == 1) {
    for (long i = -n; i <= n; ++i) visit({i * grid.step, 0.0});
  } else {
    for (long i = -n; i <= n; ++i)
      for (long j = -n; j <= n; ++j) visit({i * grid.step, j * grid.step});
  }
  rep.ok = std::isfinite(rep.c_mu);

  // Tail shell: sample rays out to twice the radius and require a
  // non-increasing envelope that stays under c_mu.
  rep.tail_ok = true;
  const int rays = eq.dim == 1 ? 2 : 16;
  const int samples = 400;
  for (int r = 0; r < rays && rep.tail_ok; ++r) {
    double ang = 2.0 * kPi * r / rays;
    RVec dir = eq.dim == 1 ? RVec{r == 0 ? 1.0 : -1.0, 0.0} : RVec{std::cos(ang), std::sin(ang)};
    double prev = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= samples; ++s) {
      double rad = grid.radius * (1.0 + static_cast<double>(s) / samples);
      double w = weighted({dir[0] * rad, dir[1] * rad});
      if (w > prev * (1.0 + 1e-12) + 1e-300 || w > rep.c_mu) {
        rep.tail_ok = false;
        break;
      }
      prev = w;
    }
  }
  return rep;
}

Equilibrium by_name(const std::string& name, int dim) {
  if (name == "gaussian") return gaussian_equilibrium(dim);
  throw DomainError("unknown equilibrium '" + name + "'");
}

}  // namespace landau::equilibria
