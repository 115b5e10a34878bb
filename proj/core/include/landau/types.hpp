#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

using cplx = std::complex<double>;

/// Wave vector k in Z^d. Components beyond the active dimension stay zero,
/// so norms and dot products are dimension-agnostic for d in {1, 2}.
using Mode = std::array<int, 2>;

/// Point in R^d (velocity or Fourier variable), padded like Mode.
using RVec = std::array<double, 2>;

inline constexpr int kMaxDim = 2;
inline constexpr double kPi = 3.14159265358979323846;

inline double norm(const Mode& k) {
  return std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
}
inline double norm(const RVec& v) { return std::hypot(v[0], v[1]); }
inline double dot(const Mode& k, const RVec& v) { return k[0] * v[0] + k[1] * v[1]; }
inline double dot(const RVec& a, const RVec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline bool is_zero(const Mode& k) { return k[0] == 0 && k[1] == 0; }

/// k scaled by a real factor, e.g. the ray η = k t.
inline RVec scale(const Mode& k, double t) {
  return {k[0] * t, k[1] * t};
}

std::string to_string(const Mode& k, int dim);

// Error hierarchy. Precondition failures are DomainError; numerical
// certificates that fail at runtime (Penrose floor, conservation, aliasing)
// are InvariantBreach so the CLI can map them to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvariantBreach : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace landau
