// SPDX-License-Identifier: Apache-2.0
#include "sjisac/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace sjisac {
namespace {

// FFTW planning is not reentrant; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void dft_inplace(std::span<cplx> x, int sign) {
  if (x.size() <= 1) return;
  fftw_plan plan = cache().get(static_cast<int>(x.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace sjisac
