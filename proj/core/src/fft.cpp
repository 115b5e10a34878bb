#include "fft.hpp"

#include <mutex>
#include <stdexcept>

namespace landau::detail {

namespace {
// Planner calls are not thread-safe in FFTW; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

BatchFft::BatchFft(const std::vector<int>& dims, int howmany, int stride, int dist, int sign) {
  std::size_t span = 1;
  for (int d : dims) span *= static_cast<std::size_t>(d);
  span = (span - 1) * static_cast<std::size_t>(stride) + static_cast<std::size_t>(howmany - 1) * dist + 1;
  std::vector<std::complex<double>> scratch(span);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany, buf, nullptr, stride, dist, buf,
                             nullptr, stride, dist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_) throw std::runtime_error("fftw planning failed");
}

BatchFft::~BatchFft() {
  if (plan_) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
}

BatchFft::BatchFft(BatchFft&& other) noexcept : plan_(other.plan_) { other.plan_ = nullptr; }

void BatchFft::execute(std::complex<double>* data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan_, buf, buf);
}

}  // namespace landau::detail
