#pragma once

#include <cstddef>

namespace mbo::simd {

// Inner loops of the spectral backends. Every table entry has a scalar
// reference and, where the CPU allows, an AVX2/FMA variant.
struct Kernels {
  const char* name;
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // yr += ar*w, yi += ai*w
  void (*axpy2)(double ar, double ai, const double* w, double* yr, double* yi, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // out[0] = sum w*xr, out[1] = sum w*xi
  void (*dot2)(const double* w, const double* xr, const double* xi, std::size_t n, double* out);
  // z[k] *= m[k] for n interleaved complex values
  void (*scale_complex)(const double* m, double* z, std::size_t n);
  // sum w*x*y
  double (*wdot)(const double* w, const double* x, const double* y, std::size_t n);
};

const Kernels& scalar_kernels();
// nullptr when the build has no AVX2 variant or the CPU lacks AVX2+FMA.
const Kernels* avx2_kernels();
// Chosen once; MBO_SIMD=scalar forces the reference path.
const Kernels& active();

}  // namespace mbo::simd
