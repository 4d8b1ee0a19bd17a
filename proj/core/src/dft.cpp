#include "dft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "iris/errors.hpp"

namespace iris::detail {
namespace {

// FFTW plan creation is not thread-safe; execution via fftw_execute_dft on
// caller-owned arrays is. One cached plan per (length, direction), created
// with FFTW_UNALIGNED so it accepts any heap buffer.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, bool inverse) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, inverse);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(n);
    fftw_plan plan =
        fftw_plan_dft_1d(static_cast<int>(n), scratch.data(), scratch.data(),
                         inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw Error(Errc::bad_config, "DFT plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, bool inverse) {
  if (x.empty()) throw Error(Errc::degenerate_input, "DFT of empty vector");
  const std::size_t n = x.size();
  fftw_plan plan = cache().get(n, inverse);
  std::vector<std::complex<double>> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<std::complex<double>> dft_real(std::span<const double> x) {
  std::vector<std::complex<double>> cx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) cx[i] = {x[i], 0.0};
  return dft(cx, /*inverse=*/false);
}

}  // namespace iris::detail
