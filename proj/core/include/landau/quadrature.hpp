#pragma once

#include <functional>
#include <vector>

#include "landau/types.hpp"

namespace landau::quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

struct AdaptiveResult {
  cplx value;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Adaptive Gauss–Legendre on [a, b]: a panel is accepted when its 10- and
/// 20-point rules agree to tol * (panel length / (b - a)); otherwise it is
/// bisected. Throws DomainError if max_panels is exhausted.
AdaptiveResult integrate(const std::function<cplx(double)>& f, double a, double b, double tol,
                         int max_panels = 200000);

}  // namespace landau::quad
