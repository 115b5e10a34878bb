#include "landau/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace landau::quad {

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace {

const GaussRule& rule10() {
  static const GaussRule r = gauss_legendre(10);
  return r;
}
const GaussRule& rule20() {
  static const GaussRule r = gauss_legendre(20);
  return r;
}

cplx apply(const GaussRule& r, const std::function<cplx(double)>& f, double a, double b, double* abs_sum = nullptr) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  cplx sum = 0.0;
  double mag = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const cplx v = f(mid + half * r.nodes[i]);
    sum += r.weights[i] * v;
    mag += r.weights[i] * std::abs(v);
  }
  if (abs_sum) *abs_sum = std::abs(half) * mag;
  return half * sum;
}

}  // namespace

AdaptiveResult integrate(const std::function<cplx(double)>& f, double a, double b, double tol,
                         int max_panels) {
  AdaptiveResult out{0.0, 0.0, 0};
  if (!(b > a)) return out;
  const double length = b - a;
  std::vector<std::pair<double, double>> stack{{a, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    cplx coarse = apply(rule10(), f, lo, hi);
    double mag = 0.0;
    cplx fine = apply(rule20(), f, lo, hi, &mag);
    double err = std::abs(fine - coarse);
    // Below 50 eps int|f| the estimate is roundoff and bisection cannot help.
    double allowed = std::max(tol * (hi - lo) / length, 50.0 * std::numeric_limits<double>::epsilon() * mag);
    if (err <= allowed || (hi - lo) < 1e-12 * length) {
      out.value += fine;
      out.error_estimate += err;
      ++out.panels;
      continue;
    }
    if (out.panels + static_cast<int>(stack.size()) > max_panels)
      throw DomainError("adaptive quadrature: panel budget exhausted");
    double mid = 0.5 * (lo + hi);
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, mid);
  }
  return out;
}

}  // namespace landau::quad
