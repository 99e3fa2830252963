#include "mbo/fft.hpp"

#include <fftw3.h>

#include <new>

namespace mbo::fft {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void FreeDeleter::operator()(void* p) const { fftw_free(p); }

Buffer<double> alloc_real(std::size_t n) {
  auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * (n == 0 ? 1 : n)));
  if (!p) throw std::bad_alloc();
  return Buffer<double>(p);
}

Buffer<double> alloc_complex(std::size_t n) { return alloc_real(2 * n); }

}  // namespace mbo::fft
