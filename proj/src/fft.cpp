#include "sfnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace sfnls::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // The planner is not thread-safe, hence the lock around creation.
    ComplexVector in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fft: failed to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::span<const Complex> in, std::span<Complex> out, int sign) {
  if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
  if (in.empty()) return;
  fftw_plan plan = cache().get(in.size(), sign);
  // Out-of-place complex transforms leave the input untouched.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void forward(std::span<const Complex> in, std::span<Complex> out) { execute(in, out, FFTW_FORWARD); }
void backward(std::span<const Complex> in, std::span<Complex> out) { execute(in, out, FFTW_BACKWARD); }

ComplexVector forward(std::span<const Complex> in) {
  ComplexVector out(in.size());
  forward(in, out);
  return out;
}

ComplexVector backward(std::span<const Complex> in) {
  ComplexVector out(in.size());
  backward(in, out);
  return out;
}

}  // namespace sfnls::fft
