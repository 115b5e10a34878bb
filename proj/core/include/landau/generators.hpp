#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "landau/series.hpp"
#include "landau/types.hpp"

namespace landau::generators {

/// Weight/functional parameter bundle.
struct GevreyParams {
  int dim = 1;
  double gamma = 1.0;
  double sigma = 4.0;
  double alpha = 0.2;
  double lambda0 = 0.05;
  double delta = 0.5;
  double lambda1 = 0.5;

  /// Every violated constraint, worded for the config loader. theta1 enters
  /// through lambda0 <= min{lambda1/4, theta1/4}.
  std::vector<std::string> violations(double theta1) const;
};

/// <k, eta> = sqrt(1 + |k|^2 + |eta|^2).
double bracket(const Mode& k, const RVec& eta);

/// log A_{k,eta} = z <k,eta>^gamma + sigma log <k,eta>.
double log_weight(const Mode& k, const RVec& eta, double z, const GevreyParams& p);

/// A_{k,eta}; overflows to +inf for large arguments (use log_weight).
double weight(const Mode& k, const RVec& eta, double z, const GevreyParams& p);

struct FResult {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  Mode argmax_k{0, 0};
};

/// F[rho](t, z) = sup_{k != 0} A_{k,kt} |rho(k)| |k|^{-alpha} over the given modes.
/// Throws DomainError("weight overflow ...") naming (k, t) if a term leaves
/// the double range.
FResult f_functional(std::span<const Mode> modes, std::span<const cplx> rho, double t, double z,
                     const GevreyParams& p);
FResult f_functional(const DensitySeries& rho, std::size_t time_index, double z, const GevreyParams& p);

/// Spectrum of one species in the gliding frame on a centred eta grid:
/// eta_m = (m - n/2) deta per dimension, flattened row-major for d = 2.
struct GlidingSpectrum {
  int dim = 1;
  int n_eta = 0;
  double deta = 0.0;
  std::vector<Mode> modes;
  std::vector<std::vector<cplx>> g;                 ///< [mode][eta]
  std::vector<std::array<std::vector<cplx>, 2>> dg; ///< [mode][direction][eta]

  std::size_t points() const;
  RVec eta(std::size_t flat) const;
};

struct GResult {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  /// |G_h - G_{2h}| / G_h, trapezoid against the every-other-point rule.
  double quad_error = 0.0;
  /// Share of the integrand on the outermost eta band (5% of the grid per side).
  double edge_fraction = 0.0;
  /// Geometric extrapolation of the |k|-shell totals beyond the last shell, relative to G.
  double k_tail = 0.0;
};

/// G = sum_{|j|<=1} sum_k int A^{d+1} (|d^j g_+|^{d+1} + |d^j g_-|^{d+1}) d eta,
/// accumulated in log space. Throws DomainError on overflow or when
/// quad_error exceeds quad_tol.
GResult g_functional(const GlidingSpectrum& plus, const GlidingSpectrum& minus, double z,
                     const GevreyParams& p, double quad_tol = 1e-3);

/// lambda(t) = lambda0 + lambda0 (1 + t)^{-delta}.
double lambda_schedule(double t, const GevreyParams& p);

struct Ratio {
  double c0_est = 0.0;
};

/// c0 = F / G^{1/(d+1)}, 0 when both vanish. G = 0 with F > 0 is an
/// InvariantBreach.
Ratio check_embedding(double f_val, double g_val, int dim);

struct Fit {
  double lambda_fit = 0.0;
  double c_fit = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
  bool envelope = false;
};

/// Least squares of log y against -lambda x + log c on the local-maximum
/// envelope of y (or all positive samples when fewer than 4 peaks exist).
/// Throws DomainError with fewer than 4 usable points.
Fit fit_log_envelope(std::span<const double> x, std::span<const double> y);

/// Decay fit of a field-magnitude series against <t> = sqrt(1 + t^2) on [t_lo, t_hi].
Fit fit_decay(std::span<const double> t, std::span<const double> e_series, double t_lo, double t_hi);

/// Sup constant of the comparison-kernel inequality
///   <k,kt>^sigma e^{-theta1|k|(t-s)/4} <= C <k,ks>^sigma,
/// from the two-regime bound (s <= t/2 and s > t/2).
double comparison_constant(double sigma, double theta1);

/// One snapshot of the quantities entering the G-evolution inequality.
struct L41Snapshot {
  double t = 0.0;
  double f = 0.0;        ///< F[rho](t, z)
  double g = 0.0;        ///< G(z)
  double g_zplus = 0.0;  ///< G(z + dz)
  double g_zminus = 0.0; ///< G(z - dz)
  double dz = 0.0;
};

struct L41Report {
  double c_min = 0.0;     ///< smallest C that makes the inequality hold everywhere
  double t_at_max = 0.0;
  std::vector<double> times;
  std::vector<double> dgdt;
  std::vector<double> rhs_first;   ///< F G^{d/(d+1)}
  std::vector<double> rhs_second;  ///< (1+t) F dG/dz
  std::vector<double> c_local;
};

/// d_t G <= C F G^{d/(d+1)} + C (1+t) F d_z G, with central differences in t
/// (interior snapshots) and z. |d_t G| below noise_rel * G counts as zero.
/// Throws DomainError for fewer than 3 snapshots or non-increasing times.
L41Report check_l41_inequality(std::span<const L41Snapshot> snaps, int dim, double noise_rel = 1e-11);

}  // namespace landau::generators
