#include <immintrin.h>

#include "mbo/simd/kernels.hpp"

namespace mbo::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpy2(double ar, double ai, const double* w, double* yr, double* yi, std::size_t n) {
  __m256d var = _mm256_set1_pd(ar);
  __m256d vai = _mm256_set1_pd(ai);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vw = _mm256_loadu_pd(w + i);
    _mm256_storeu_pd(yr + i, _mm256_fmadd_pd(var, vw, _mm256_loadu_pd(yr + i)));
    _mm256_storeu_pd(yi + i, _mm256_fmadd_pd(vai, vw, _mm256_loadu_pd(yi + i)));
  }
  for (; i < n; ++i) {
    yr[i] += ar * w[i];
    yi[i] += ai * w[i];
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void dot2(const double* w, const double* xr, const double* xi, std::size_t n, double* out) {
  __m256d ar = _mm256_setzero_pd();
  __m256d ai = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vw = _mm256_loadu_pd(w + i);
    ar = _mm256_fmadd_pd(vw, _mm256_loadu_pd(xr + i), ar);
    ai = _mm256_fmadd_pd(vw, _mm256_loadu_pd(xi + i), ai);
  }
  double sr = hsum(ar), si = hsum(ai);
  for (; i < n; ++i) {
    sr += w[i] * xr[i];
    si += w[i] * xi[i];
  }
  out[0] = sr;
  out[1] = si;
}

void scale_complex(const double* m, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // (m0, m0, m1, m1)
    __m128d mm = _mm_loadu_pd(m + i);
    __m256d vm = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0x50);
    _mm256_storeu_pd(z + 2 * i, _mm256_mul_pd(vm, _mm256_loadu_pd(z + 2 * i)));
  }
  for (; i < n; ++i) {
    z[2 * i] *= m[i];
    z[2 * i + 1] *= m[i];
  }
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

}  // namespace

const Kernels& avx2_table() {
  static const Kernels k{"avx2", axpy, axpy2, dot, dot2, scale_complex, wdot};
  return k;
}

}  // namespace mbo::simd
