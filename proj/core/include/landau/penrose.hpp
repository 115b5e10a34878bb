#pragma once

#include <vector>

#include "landau/equilibria.hpp"
#include "landau/types.hpp"

namespace landau::penrose {

struct DispersionQuery {
  Mode k{1, 0};
  cplx lambda{0.0, 0.0};
  double alpha = 0.0;  ///< perturbation parameter; the mass ratio in practice
};

/// L[t mu_hat(k t)](lambda) = int_0^inf e^{-lambda t} t mu_hat(k t) dt.
///
/// The truncation T is solved from the certified tail c_mu e^{-rT}(T/r + 1/r^2)
/// with r = theta0 |k| + Re(lambda); the remainder on [0, T] goes to adaptive
/// Gauss–Legendre at tolerance tol. Throws DomainError when k = 0 or
/// Re(lambda) <= -theta0 |k| (outside the analyticity strip).
cplx laplace_kernel(const equilibria::Equilibrium& eq, const Mode& k, cplx lambda, double tol = 1e-12);

/// D(lambda, k; alpha) = 1 + (1 + alpha) L[t mu_hat(k t)](lambda).
cplx dispersion(const equilibria::Equilibrium& eq, const DispersionQuery& q, double tol = 1e-10);

struct ScanOptions {
  double alpha = 0.0;
  int k_max = 8;
  double im_max = 60.0;  ///< M, the |Im lambda| scan limit
  double step = 0.05;
  double tol = 1e-10;
  double kappa0 = 1.0;   ///< margin whose half must be cleared
  bool interior_check = true;
  bool keep_samples = true;
};

struct Sample {
  Mode k;
  double im_lambda;
  double abs_d;
};

struct PenroseReport {
  double inf_modulus = 0.0;
  Mode argmin_k{0, 0};
  cplx argmin_lambda{0.0, 0.0};
  double boundary_radius = 0.0;
  /// Upper bound on |D - 1| outside the scanned set: modes with |k| > k_max
  /// and the boundary beyond |Im lambda| > M.
  double tail_bound = 0.0;
  double mode_tail_bound = 0.0;
  double freq_tail_bound = 0.0;
  bool kappa_half_ok = false;
  double alpha0 = 0.0;
  /// A coarse interior sample (Re lambda > 0) fell below the boundary minimum.
  bool interior_flag = false;
  std::vector<Sample> samples;
};

/// Scans |D| on Re lambda = 0, |Im lambda| <= M, for all 0 < |k| <= k_max.
/// Throws InvariantBreach when the scan yields non-finite values.
PenroseReport penrose_infimum(const equilibria::Equilibrium& eq, const ScanOptions& opt);

/// alpha0 = kappa0 theta0^2 / (2 c_mu).
double alpha_threshold(double kappa0, double c_mu, double theta0);

/// Nonzero modes with |k| <= k_max in lexicographic order; for d = 1 this is
/// 1..k_max only (D depends on k through mu_hat(k t), and mu_hat is even).
std::vector<Mode> scan_modes(int dim, int k_max);

}  // namespace landau::penrose
