#include "fft.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace curlsob::fft {
namespace {

enum class Kind { kR2C, kC2R, kC2CForward, kC2CBackward };

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<Kind, int, int>, fftw_plan> plans;
  int nthreads = 1;
  bool initialized = false;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

int requested_threads() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("CURLSOB_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) return std::min(cap, hw);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

// Plans are made with FFTW_ESTIMATE so the chosen algorithm (and hence the
// rounding) does not depend on timing measurements.
fftw_plan plan_for(Kind kind, int n, int howmany) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  if (!c.initialized) {
    c.nthreads = requested_threads();
    if (c.nthreads > 1) {
      fftw_init_threads();
      fftw_plan_with_nthreads(c.nthreads);
    }
    c.initialized = true;
  }
  const auto key = std::make_tuple(kind, n, howmany);
  if (auto it = c.plans.find(key); it != c.plans.end()) return it->second;

  const int dims[3] = {n, n, n};
  const std::size_t real_count = std::size_t(n) * n * n * howmany;
  const std::size_t half_count = std::size_t(n) * n * (n / 2 + 1) * howmany;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  switch (kind) {
    case Kind::kR2C: {
      std::vector<double> in(real_count);
      std::vector<std::complex<double>> out(half_count);
      plan = fftw_plan_many_dft_r2c(3, dims, howmany, in.data(), nullptr, howmany, 1,
                                    reinterpret_cast<fftw_complex*>(out.data()), nullptr, howmany,
                                    1, flags);
      break;
    }
    case Kind::kC2R: {
      std::vector<std::complex<double>> in(half_count);
      std::vector<double> out(real_count);
      plan = fftw_plan_many_dft_c2r(3, dims, howmany, reinterpret_cast<fftw_complex*>(in.data()),
                                    nullptr, howmany, 1, out.data(), nullptr, howmany, 1, flags);
      break;
    }
    case Kind::kC2CForward:
    case Kind::kC2CBackward: {
      std::vector<std::complex<double>> in(real_count), out(real_count);
      plan = fftw_plan_many_dft(3, dims, howmany, reinterpret_cast<fftw_complex*>(in.data()),
                                nullptr, howmany, 1, reinterpret_cast<fftw_complex*>(out.data()),
                                nullptr, howmany, 1,
                                kind == Kind::kC2CForward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
      break;
    }
  }
  if (!plan) throw std::runtime_error("FFTW planning failed for n=" + std::to_string(n));
  c.plans.emplace(key, plan);
  return plan;
}

}  // namespace

void r2c(int n, int howmany, const double* in, std::complex<double>* out) {
  fftw_execute_dft_r2c(plan_for(Kind::kR2C, n, howmany), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void c2r(int n, int howmany, std::complex<double>* in, double* out) {
  fftw_execute_dft_c2r(plan_for(Kind::kC2R, n, howmany), reinterpret_cast<fftw_complex*>(in), out);
}

void c2c(int n, int howmany, bool forward, const std::complex<double>* in,
         std::complex<double>* out) {
  fftw_execute_dft(plan_for(forward ? Kind::kC2CForward : Kind::kC2CBackward, n, howmany),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

int threads() {
  plan_for(Kind::kR2C, 8, 1);
  return cache().nthreads;
}

}  // namespace curlsob::fft
