#pragma once

#include <cstddef>
#include <vector>

#include "landau/types.hpp"

namespace landau {

/// Uniform time grid t_n = n dt, n = 0..steps.
struct TimeGrid {
  double dt = 0.01;
  std::size_t steps = 0;

  std::size_t size() const { return steps + 1; }
  double t(std::size_t n) const { return static_cast<double>(n) * dt; }
  double t_max() const { return t(steps); }
  bool operator==(const TimeGrid&) const = default;

  static TimeGrid covering(double dt, double t_max);
};

/// Source modes S_±(t, k) = f0_±(k, k t). Indexed [mode][time].
struct SourceSeries {
  int dim = 1;
  TimeGrid grid;
  std::vector<Mode> k_set;
  std::vector<std::vector<cplx>> s_plus;
  std::vector<std::vector<cplx>> s_minus;

  /// S = S_+ - S_- for one mode.
  std::vector<cplx> total(std::size_t mode) const;
};

/// Density and field modes. rho = rho_plus - rho_minus, i k . E = rho.
struct DensitySeries {
  int dim = 1;
  TimeGrid grid;
  std::vector<Mode> k_set;
  std::vector<std::vector<cplx>> rho_plus;
  std::vector<std::vector<cplx>> rho_minus;
  std::vector<std::vector<cplx>> rho;
  std::vector<std::vector<std::array<cplx, 2>>> e_field;
};

/// E(k) = -i k rho(k) / |k|^2, with E(0) = 0.
std::array<cplx, 2> field_mode(const Mode& k, cplx rho);

}  // namespace landau
