#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "nsc/grid.hpp"

namespace nsc::detail {

/// Real-to-complex and complex-to-real 3D plans for one grid shape.
///
/// Plans are built with FFTW_ESTIMATE so the algorithm choice (and therefore
/// every rounding) is fixed for a given shape, and FFTW_UNALIGNED so they can be
/// executed on arbitrary std::vector storage via the new-array interface.
class FftPlan {
 public:
  explicit FftPlan(const GridSpec& g) {
    const std::size_t n = g.size();
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(g.spectral_size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    // FFTW is row-major, so the x1-fastest layout is (n3, n2, n1).
    r2c_ = fftw_plan_dft_r2c_3d(g.n3, g.n2, g.n1, real, cplx, flags);
    c2r_ = fftw_plan_dft_c2r_3d(g.n3, g.n2, g.n1, cplx, real, flags);
    fftw_free(real);
    fftw_free(cplx);
  }
  ~FftPlan() {
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  // New-array execution is thread-safe; only planning needs the lock.
  void forward(const double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(r2c_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  /// Destroys `in`.
  void backward(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  fftw_plan r2c_{};
  fftw_plan c2r_{};
};

inline const FftPlan& plan_for(const GridSpec& g) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{g.n1, g.n2, g.n3}];
  if (!slot) slot = std::make_unique<FftPlan>(g);
  return *slot;
}

}  // namespace nsc::detail
