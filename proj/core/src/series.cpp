#include "landau/series.hpp"

#include <cmath>

namespace landau {

TimeGrid TimeGrid::covering(double dt, double t_max) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw DomainError("time grid: dt must be positive and t_max non-negative");
  TimeGrid g;
  g.dt = dt;
  g.steps = static_cast<std::size_t>(std::llround(t_max / dt));
  if (std::abs(g.t_max() - t_max) > 1e-9 * std::max(1.0, t_max))
    throw DomainError("time grid: t_max must be an integer multiple of dt");
  return g;
}

std::vector<cplx> SourceSeries::total(std::size_t mode) const {
  std::vector<cplx> s(grid.size());
  for (std::size_t n = 0; n < s.size(); ++n) s[n] = s_plus[mode][n] - s_minus[mode][n];
  return s;
}

std::array<cplx, 2> field_mode(const Mode& k, cplx rho) {
  if (is_zero(k)) return {0.0, 0.0};
  const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
  const cplx f = cplx(0.0, -1.0) * rho / k2;
  return {f * static_cast<double>(k[0]), f * static_cast<double>(k[1])};
}

}  // namespace landau
