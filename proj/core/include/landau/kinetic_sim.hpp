#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "landau/equilibria.hpp"
#include "landau/generators.hpp"
#include "landau/linear_theory.hpp"
#include "landau/types.hpp"

namespace landau::kinetic {

struct SimConfig {
  int dim = 1;
  double epsilon = 0.01;
  /// Spatial grid points per dimension; modes with |k_i| <= n_x / 3 are kept.
  int n_x = 32;
  int n_v = 256;
  double v_max = 8.0;
  double dt = 0.05;
  double t_max = 40.0;
  double amp = 1e-3;
  /// Share of |f| allowed in the two outermost velocity cells per side.
  double boundary_tol = 1e-8;
  double cfl_transport = 200.0;  ///< bound on dt v_max K
  double cfl_accel = 2.0;        ///< bound on dt max|a| pi n_v / (2 v_max)
  /// Relative spectral content above which a mode counts for the aliasing check.
  double alias_tol = 1e-6;
  /// Gliding-frame entries below this fraction of the array maximum are
  /// roundoff and are returned as zero (the G weights would amplify them).
  double spectral_floor = 1e-13;
  /// Free-streaming mode: the acceleration sub-step is skipped.
  bool zero_field = false;

  /// Every violated precondition, empty when the config is usable.
  std::vector<std::string> violations() const;
};

/// Index bookkeeping for the x-grid (FFT order) and the v-grid.
/// Storage is f[x_index * nv_total + v_index]; x_index runs over all
/// n_x^d FFT slots, of which only |k_i| <= K are ever nonzero.
class Lattice {
 public:
  Lattice(int dim, int n_x, int n_v, double v_max);

  int dim() const { return dim_; }
  int n_x() const { return n_x_; }
  int n_v() const { return n_v_; }
  double v_max() const { return v_max_; }
  int k_cut() const { return k_cut_; }
  double dv() const { return dv_; }
  double deta() const { return kPi / v_max_; }
  double eta_nyquist() const { return kPi / dv_; }

  std::size_t nx_total() const { return nx_total_; }
  std::size_t nv_total() const { return nv_total_; }
  std::size_t size() const { return nx_total_ * nv_total_; }

  Mode mode(std::size_t x_index) const;
  /// Slot of k, or npos when k is outside the FFT box.
  std::size_t slot(const Mode& k) const;
  bool retained(std::size_t x_index) const;
  RVec v(std::size_t v_index) const;
  /// Signed DFT frequency eta_m for a v-transform index.
  RVec eta(std::size_t v_index) const;

  /// Retained modes in slot order, with their slots.
  const std::vector<Mode>& modes() const { return modes_; }
  const std::vector<std::size_t>& mode_slots() const { return mode_slots_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  int dim_;
  int n_x_;
  int n_v_;
  double v_max_;
  int k_cut_;
  double dv_;
  std::size_t nx_total_;
  std::size_t nv_total_;
  std::vector<Mode> modes_;
  std::vector<std::size_t> mode_slots_;
};

/// Perturbations f_hat_±(k, v_j). f_hat(k, v) = int f(x, v) e^{-i k.x} dx.
struct SpectralState {
  double t = 0.0;
  std::vector<cplx> f_plus;
  std::vector<cplx> f_minus;
};

enum class Species { plus, minus };

/// A Gaussian velocity profile (2 pi vt^2)^{-d/2} exp(-|v - drift|^2 / (2 vt^2)).
struct VelocityProfile {
  double thermal = 1.0;
  RVec drift{0.0, 0.0};
};

/// amplitude * cos(k.x + phase) * profile(v) added to one species.
struct SeedTerm {
  Mode k{1, 0};
  double amplitude = 0.0;
  double phase = 0.0;
  Species species = Species::plus;
  VelocityProfile profile;
};

using SeedSpec = std::vector<SeedTerm>;

/// Analytic transform f0_hat(k, eta) of the seed for one species.
linear::SpectrumFn seed_spectrum(const SeedSpec& seed, Species s, int dim);

struct InitReport {
  SpectralState state;
  double net_charge = 0.0;  ///< int int (f_+ - f_-) dv dx
  double g_initial = 0.0;   ///< G[f0](lambda1)
};

struct Diagnostics {
  double t = 0.0;
  double mass_plus = 0.0;
  double mass_minus = 0.0;
  double neutrality = 0.0;       ///< |rho_hat(t, 0)|
  double reality_defect = 0.0;   ///< max |f(-k, v) - conj f(k, v)|
  double boundary_fraction = 0.0;
};

/// E_hat(k) for each mode (d components, padded). Throws InvariantBreach if
/// |rho_hat(0)| exceeds neutral_tol.
std::vector<std::array<cplx, 2>> field_from_density(const std::vector<Mode>& modes, const std::vector<cplx>& rho,
                                                    double neutral_tol = 1e-10);

/// Evaluates a gliding spectrum at an arbitrary eta by exact trigonometric
/// (Dirichlet) interpolation of the v-grid transform.
cplx interpolate(const generators::GlidingSpectrum& spec, std::size_t mode, const RVec& eta, double v_max);

class Solver {
 public:
  Solver(const SimConfig& cfg, const equilibria::Equilibrium& eq);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  const SimConfig& config() const { return cfg_; }
  const Lattice& lattice() const { return lattice_; }

  /// Assembles f0 from the seed. Throws DomainError when the seed carries a
  /// net charge beyond 1e-12 or touches a mode outside the retained set.
  InitReport init_state(const SeedSpec& seed, const generators::GevreyParams& params) const;

  /// One Strang step: half transport, field from the mid-step density,
  /// acceleration of mu + f_± by +eps E and -E, half transport.
  void step(SpectralState& state) const;

  /// Density rho_hat_s(k) over lattice().modes().
  std::vector<cplx> density(const SpectralState& state, Species s) const;
  /// rho_+ - rho_-.
  std::vector<cplx> charge(const SpectralState& state) const;

  struct Gliding {
    generators::GlidingSpectrum plus;
    generators::GlidingSpectrum minus;
  };
  /// g_hat_±(t, k, eta) on the centred eta grid plus the eta-gradient.
  /// Throws InvariantBreach when a mode with content above alias_tol has been
  /// sheared past the eta Nyquist limit (|k_i| t >= pi / dv).
  Gliding gliding_frame(const SpectralState& state) const;

  Diagnostics diagnostics(const SpectralState& state) const;

 private:
  struct Impl;
  SimConfig cfg_;
  Lattice lattice_;
  std::unique_ptr<Impl> impl_;

  void transport(SpectralState& state) const;
  void accelerate(std::vector<cplx>& f, const std::vector<double>& ax, const std::vector<double>& ay) const;
  generators::GlidingSpectrum frame_of(const std::vector<cplx>& f, double t) const;
};

}  // namespace landau::kinetic
