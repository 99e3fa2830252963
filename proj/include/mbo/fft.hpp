#pragma once

#include <cstddef>
#include <memory>
#include <mutex>

namespace mbo::fft {

// FFTW's planner is not re-entrant; execution with the new-array API is.
std::mutex& planner_mutex();

struct FreeDeleter {
  void operator()(void* p) const;
};

template <class T>
using Buffer = std::unique_ptr<T[], FreeDeleter>;

Buffer<double> alloc_real(std::size_t n);
// n complex values, interleaved (re, im).
Buffer<double> alloc_complex(std::size_t n);

}  // namespace mbo::fft
