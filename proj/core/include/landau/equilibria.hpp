#pragma once

#include <functional>
#include <string>

#include "landau/types.hpp"

namespace landau::equilibria {

/// A homogeneous equilibrium described through its Fourier transform.
///
/// Everything downstream (dispersion functional, Volterra kernel, the
/// kinetic solver's background) consumes mu_hat and its derivatives only.
/// `c_mu` and `theta0` are the certified constants of the decay bound
///   sum_{|j|<=2} |d^j mu_hat(eta)| <= c_mu * exp(-theta0 |eta|).
struct Equilibrium {
  std::string name;
  int dim = 1;
  std::function<double(const RVec&)> mu_hat;
  std::function<RVec(const RVec&)> mu_hat_grad;
  /// Sum of |second derivatives| over multi-indices |j| = 2.
  std::function<double(const RVec&)> mu_hat_hess_norm;
  double c_mu = 0.0;
  double theta0 = 0.0;

  /// Sum over |j| <= 2 of |d^j mu_hat(eta)|.
  double derivative_sum(const RVec& eta) const;
};

struct CertGrid {
  double radius = 12.0;
  double step = 0.01;
};

struct CertReport {
  double c_mu = 0.0;
  RVec worst_eta{0.0, 0.0};
  bool ok = false;
  /// The weighted derivative sum keeps decreasing on a sampled shell
  /// [radius, 2 radius] and stays below c_mu there.
  bool tail_ok = false;
};

inline constexpr double kDefaultTheta0 = 0.5;

/// Normalized Gaussian: mu(v) = (2 pi)^{-d/2} exp(-|v|^2/2), mu_hat(eta) = exp(-|eta|^2/2).
/// c_mu is certified at theta0 = 1/2 on the default grid (step 0.05 when d = 2).
Equilibrium gaussian_equilibrium(int dim);

/// The zero transform; useful as the degenerate case (D == 1, K == 0).
Equilibrium zero_equilibrium(int dim);

/// Grid certification of the analyticity/decay bound. Throws DomainError on
/// theta0 < 0, a non-positive grid, or non-finite mu_hat values.
CertReport certify_h1(const Equilibrium& eq, double theta0, const CertGrid& grid);

/// Looks up an equilibrium by its config name ("gaussian").
Equilibrium by_name(const std::string& name, int dim);

}  // namespace landau::equilibria
