#include "mbo/simd/kernels.hpp"

namespace mbo::simd {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy2(double ar, double ai, const double* w, double* yr, double* yi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    yr[i] += ar * w[i];
    yi[i] += ai * w[i];
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void dot2(const double* w, const double* xr, const double* xi, std::size_t n, double* out) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sr += w[i] * xr[i];
    si += w[i] * xi[i];
  }
  out[0] = sr;
  out[1] = si;
}

void scale_complex(const double* m, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    z[2 * i] *= m[i];
    z[2 * i + 1] *= m[i];
  }
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", axpy, axpy2, dot, dot2, scale_complex, wdot};
  return k;
}

}  // namespace mbo::simd
