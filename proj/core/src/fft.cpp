#include "qslab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace qslab::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int points, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, points, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t size = dim == 1 ? static_cast<std::size_t>(points)
                                : static_cast<std::size_t>(points) * static_cast<std::size_t>(points);
    std::vector<Complex> scratch(size);
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = dim == 1
                         ? fftw_plan_dft_1d(points, data, data, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                         : fftw_plan_dft_2d(points, points, data, data, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericalError("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(int dim, int points, int sign, std::span<const Complex> in, std::span<Complex> out) {
  if (dim != 1 && dim != 2) throw PreconditionError("fft: dimension must be 1 or 2");
  std::size_t size = dim == 1 ? static_cast<std::size_t>(points)
                              : static_cast<std::size_t>(points) * static_cast<std::size_t>(points);
  if (in.size() != size || out.size() != size) throw PreconditionError("fft: buffer size mismatch");
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* data = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(cache().get(dim, points, sign), data, data);
}

}  // namespace

void forward(int dim, int points, std::span<const Complex> in, std::span<Complex> out) {
  execute(dim, points, FFTW_FORWARD, in, out);
}

void backward(int dim, int points, std::span<const Complex> in, std::span<Complex> out) {
  execute(dim, points, FFTW_BACKWARD, in, out);
}

}  // namespace qslab::fft
