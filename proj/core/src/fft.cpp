#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace zrlab::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plans] : plans_) {
      fftw_destroy_plan(plans.forward);
      fftw_destroy_plan(plans.backward);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;

    auto* scratch = fftw_alloc_complex(n);
    const int size = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair pair;
    pair.forward = fftw_plan_dft_1d(size, scratch, scratch, FFTW_FORWARD, flags);
    pair.backward = fftw_plan_dft_1d(size, scratch, scratch, FFTW_BACKWARD, flags);
    fftw_free(scratch);
    return plans_.emplace(n, pair).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(std::span<std::complex<double>> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) {
  if (data.empty()) return;
  const auto& plans = cache().get(data.size());
  fftw_execute_dft(plans.forward, as_fftw(data), as_fftw(data));
}

void fft_backward(std::span<std::complex<double>> data) {
  if (data.empty()) return;
  const auto& plans = cache().get(data.size());
  fftw_execute_dft(plans.backward, as_fftw(data), as_fftw(data));
}

}  // namespace zrlab::detail
