#include "virann/fourier.hpp"

#include <map>
#include <mutex>

#include <fftw3.h>

namespace virann::fourier {

namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const Plans& plans_for(int G) {
  static std::map<int, Plans> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(G);
  if (it != cache.end()) return it->second;
  auto* in = fftw_alloc_complex(G);
  auto* out = fftw_alloc_complex(G);
  Plans p;
  p.forward = fftw_plan_dft_1d(G, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_1d(G, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(G, p).first->second;
}

std::vector<cplx> run(const std::vector<cplx>& x, bool forward) {
  const int G = static_cast<int>(x.size());
  std::vector<cplx> y(G);
  if (G == 0) return y;
  const Plans& p = plans_for(G);
  auto* in = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(x.data()));
  auto* out = reinterpret_cast<fftw_complex*>(y.data());
  fftw_execute_dft(forward ? p.forward : p.backward, in, out);
  return y;
}

}  // namespace

std::vector<cplx> analyze(const std::vector<cplx>& samples) {
  auto y = run(samples, true);
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (auto& v : y) v *= inv;
  return y;
}

std::vector<cplx> synthesize(const std::vector<cplx>& coeffs) { return run(coeffs, false); }

std::vector<cplx> derivative(const std::vector<cplx>& samples) {
  const int G = static_cast<int>(samples.size());
  auto F = analyze(samples);
  for (int j = 0; j < G; ++j) {
    const int n = frequency(j, G);
    F[j] *= (2 * n == G) ? cplx(0.0) : cplx(0.0, static_cast<double>(n));
  }
  return synthesize(F);
}

}  // namespace virann::fourier
