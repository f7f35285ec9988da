#include "calderlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace calderlab::fft {
namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  // Plans are out-of-place and unaligned so they can be reused on any buffers.
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find({n, sign});
    if (it != plans.end()) return it->second;
    std::vector<fftw_complex> a(n), b(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), a.data(), b.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(std::make_pair(n, sign), p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(const std::complex<double>* in, std::complex<double>* out, std::size_t n, int sign) {
  fftw_plan p = cache().get(n, sign);
  if (in == out) {
    std::vector<std::complex<double>> tmp(in, in + n);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out));
    return;
  }
  // Out-of-place complex plans leave the input untouched.
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
  run(in, out, n, FFTW_FORWARD);
}

void backward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
  run(in, out, n, FFTW_BACKWARD);
}

}  // namespace calderlab::fft
