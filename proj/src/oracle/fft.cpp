#include "fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace popper::oracle::detail {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
};

using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

}  // namespace

void dft_inplace(std::vector<std::complex<double>>& data, std::size_t rows, std::size_t cols,
                 FftDirection dir) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    if (rows == 0) {
      plan.reset(fftw_plan_dft_1d(static_cast<int>(cols), buf, buf, sign, flags));
    } else {
      plan.reset(fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, sign, flags));
    }
  }
  fftw_execute(plan.get());
}

}  // namespace popper::oracle::detail
