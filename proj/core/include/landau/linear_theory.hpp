#pragma once

#include <functional>
#include <vector>

#include "landau/equilibria.hpp"
#include "landau/generators.hpp"
#include "landau/series.hpp"

namespace landau::linear {

/// Initial-data transform f0_hat(k, eta).
using SpectrumFn = std::function<cplx(const Mode&, const RVec&)>;

/// Thrown when a tabulated spectrum is queried outside its eta grid.
class OutOfGrid : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Tabulated f0_hat on a uniform eta grid (centred, n points per dimension,
/// flattened row-major for d = 2), per mode, with 4-point Lagrange
/// interpolation in each direction. Queries outside the table throw OutOfGrid.
struct GriddedSpectrum {
  int dim = 1;
  int n_eta = 0;
  double deta = 0.0;
  std::vector<Mode> modes;
  std::vector<std::vector<cplx>> values;

  cplx operator()(const Mode& k, const RVec& eta) const;
};

/// S_±(t_n, k) = f0_±(k, k t_n).
SourceSeries build_source(const SpectrumFn& f0_plus, const SpectrumFn& f0_minus, const TimeGrid& grid,
                          const std::vector<Mode>& k_set, int dim);

/// Trapezoidal marching of the closed density equations
///   rho_+ + eps (rho_+ - rho_-) * kappa = S_+,
///   rho_- -     (rho_+ - rho_-) * kappa = S_-,
/// with kappa(tau) = tau mu_hat(k tau). kappa(0) = 0 makes each step explicit.
DensitySeries solve_volterra(const SourceSeries& src, const equilibria::Equilibrium& eq, double epsilon);

/// Max over modes and nodes of the residual of the discrete equations
/// (same trapezoidal quadrature), relative to max |S|.
double volterra_residual(const DensitySeries& rho, const SourceSeries& src, const equilibria::Equilibrium& eq,
                         double epsilon);

struct KernelOptions {
  double tol = 1e-8;
  double denominator_floor = 1e-3;
  double fit_lo = 1.0;   ///< fit window in t
  double fit_hi = 15.0;
  double max_im = 1e5;   ///< give up beyond this truncation
};

/// Resolvent kernel K_hat(t, k) for one mode.
struct KernelSeries {
  TimeGrid grid;
  Mode k{1, 0};
  double epsilon = 0.0;
  double theta1 = 0.0;
  std::vector<cplx> k_hat;
  double fit_c = 0.0;
  double fit_theta = 0.0;
  double fit_r2 = 0.0;
  // Contour diagnostics.
  double contour_re = 0.0;
  double im_cutoff = 0.0;
  double im_step = 0.0;
  double min_denominator = 0.0;
};

/// K_tilde(lambda, k) = L / (1 + (1+eps) L), L = Laplace[t mu_hat(k t)](lambda).
cplx resolvent_symbol(const equilibria::Equilibrium& eq, double epsilon, const Mode& k, cplx lambda,
                      double tol = 1e-13);

/// Inverse Laplace transform of K_tilde along Re lambda = -theta1 |k|.
/// The O(lambda^-2..-4) asymptotics are removed analytically (poles at
/// -(theta1|k| + 1)); the remainder is integrated by the trapezoid rule with
/// cutoff and step refined until the change drops below tol.
/// Throws DomainError unless 0 < theta1 < theta0, and InvariantBreach when
/// the denominator drops below the floor on the contour (Penrose violation)
/// or the truncation cannot reach tol.
KernelSeries kernel_inverse_laplace(const equilibria::Equilibrium& eq, double epsilon, const Mode& k, double theta1,
                                    const TimeGrid& grid, const KernelOptions& opt = {});

/// int_0^T e^{-lambda t} K_hat(t) dt by composite Simpson (3/8 on a trailing
/// odd panel).
cplx forward_laplace(const KernelSeries& ker, cplx lambda);

/// rho = S - (1+eps) K*S, rho_+ = S_+ - eps K*S, rho_- = S_- + K*S, trapezoidal.
/// kernels[i] must belong to src.k_set[i] and share src.grid.
DensitySeries reconstruct_rho(const SourceSeries& src, const std::vector<KernelSeries>& kernels, double epsilon);

struct FitReport {
  double c_fit = 0.0;
  double t_at_max = 0.0;
  bool ok = false;
  std::vector<double> f_rho;
  std::vector<double> f_source;
  std::vector<double> memory;  ///< int_0^t e^{-theta1 (t-s)/4} F[S](s) ds
};

/// Smallest C with F[rho](t,z) <= F[S](t,z) + C int_0^t e^{-theta1(t-s)/4} F[S](s,z) ds
/// on every node. Throws DomainError unless 0 <= z <= theta1/2.
FitReport verify_linear_gevrey(const DensitySeries& rho, const SourceSeries& src,
                               const generators::GevreyParams& params, double theta1, double z);

/// Discrete trapezoidal convolution (a*b)_n = dt sum_j w_j a_j b_{n-j}.
std::vector<cplx> trapezoid_convolution(std::span<const cplx> a, std::span<const cplx> b, double dt);

}  // namespace landau::linear
