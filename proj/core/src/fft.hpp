#pragma once

#include <fftw3.h>

#include <complex>
#include <vector>

namespace landau::detail {

/// Batched in-place-or-not complex DFT of rank 1 or 2 (FFTW_ESTIMATE, so the
/// chosen algorithm and hence the output bits are reproducible).
class BatchFft {
 public:
  /// dims: transform lengths; howmany/stride/dist as in fftw_plan_many_dft.
  BatchFft(const std::vector<int>& dims, int howmany, int stride, int dist, int sign);
  ~BatchFft();
  BatchFft(const BatchFft&) = delete;
  BatchFft& operator=(const BatchFft&) = delete;
  BatchFft(BatchFft&& other) noexcept;
  BatchFft& operator=(BatchFft&&) = delete;

  void execute(std::complex<double>* data) const;

 private:
  fftw_plan plan_ = nullptr;
};

}  // namespace landau::detail
