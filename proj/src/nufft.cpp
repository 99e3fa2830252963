#include "mbo/nufft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "mbo/error.hpp"
#include "mbo/fft.hpp"
#include "mbo/parallel.hpp"
#include "mbo/simd/kernels.hpp"

namespace mbo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxWidth = 64;
constexpr double kOversample = 2.0;

struct AxisWeights {
  long start = 0;
  std::array<double, kMaxWidth> w{};
  std::array<std::size_t, kMaxWidth> idx{};  // wrapped fine-grid indices
};

struct PointWeights {
  std::array<AxisWeights, 3> axis;
};

}  // namespace

void ModeGrid::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorKind::InvalidInput, "mode spacing h must be positive");
  if (m_half < 1) fail(ErrorKind::InvalidInput, "mode half-width M must be at least 1");
}

struct Nufft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(fft::planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

Nufft::Nufft(const ModeGrid& modes, double tol) : modes_(modes), tol_(tol) {
  modes_.validate();
  if (!(tol >= 1e-12 && tol <= 1e-2)) fail(ErrorKind::OutOfRange, "nufft tolerance must lie in [1e-12, 1e-2]");
  const double r = kOversample;
  msp_ = static_cast<int>(std::ceil(-std::log(tol) * (r - 0.5) / (kPi * (r - 1.0))));
  msp_ = std::clamp(msp_, 2, kMaxWidth / 2);
  const std::size_t mm = modes_.per_axis();
  mr_ = static_cast<std::size_t>(r) * mm;
  mr_ = std::max<std::size_t>(mr_, 2 * static_cast<std::size_t>(msp_));
  // Few modes with a wide kernel enlarge the fine grid; the spread then uses the actual ratio.
  const double ratio = static_cast<double>(mr_) / static_cast<double>(mm);
  tau_g_ = kPi * msp_ / (static_cast<double>(mm * mm) * ratio * (ratio - 0.5));

  deconv_.resize(mm);
  for (std::size_t i = 0; i < mm; ++i) {
    double k = static_cast<double>(static_cast<long>(i) - modes_.m_half);
    deconv_[i] = std::sqrt(kPi / tau_g_) * std::exp(k * k * tau_g_) / static_cast<double>(mr_);
  }

  const double delta = 2.0 * kPi / static_cast<double>(mr_);
  gauss_a_ = delta * delta / (4.0 * tau_g_);
  gauss_e3_.resize(2 * static_cast<std::size_t>(msp_));
  for (int t = 0; t < 2 * msp_; ++t) {
    double j = t - msp_ + 1;
    gauss_e3_[t] = std::exp(-gauss_a_ * j * j);
  }

  plans_ = std::make_unique<Plans>();
  // Split plans only accept new arrays with the planned im - re offset, so both halves share one block.
  auto block = fft::alloc_real(2 * mr_ * mr_ * mr_);
  double* re = block.get();
  double* im = re + mr_ * mr_ * mr_;
  fftw_iodim dims[3];
  const int n = static_cast<int>(mr_);
  dims[0] = {n, n * n, n * n};
  dims[1] = {n, n, n};
  dims[2] = {n, 1, 1};
  std::lock_guard<std::mutex> lock(fft::planner_mutex());
  plans_->forward = fftw_plan_guru_split_dft(3, dims, 0, nullptr, re, im, re, im, FFTW_ESTIMATE);
  // Swapping real and imaginary arrays turns the forward transform into the backward one.
  plans_->backward = fftw_plan_guru_split_dft(3, dims, 0, nullptr, im, re, im, re, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) fail(ErrorKind::InvalidInput, "FFT planning failed");
}

Nufft::~Nufft() = default;

void Nufft::check_points(std::span<const Point3> points) const {
  for (const auto& p : points)
    for (double x : p)
      if (!(x >= -kPi && x < kPi)) fail(ErrorKind::OutOfRange, "nufft point outside [-pi, pi)^3");
}

namespace {

double fine_coordinate(double x, double h, std::size_t mr) {
  const double delta = 2.0 * kPi / static_cast<double>(mr);
  double u = std::fmod(h * x / delta, static_cast<double>(mr));
  if (u < 0.0) u += static_cast<double>(mr);
  return u;
}

// Gaussian weights as e^{-a(j-f)^2} = e^{-a f^2} (e^{2af})^j e^{-a j^2}; the last factor is tabulated.
void kernel_weights(const Point3& x, double h, std::size_t mr, int msp, double a, const double* e3, PointWeights& pw) {
  for (int ax = 0; ax < 3; ++ax) {
    const double u = fine_coordinate(x[ax], h, mr);
    const double l0 = std::floor(u);
    const double f = u - l0;
    AxisWeights& aw = pw.axis[ax];
    aw.start = static_cast<long>(l0) - msp + 1;
    const double step = std::exp(2.0 * a * f);
    double p = std::exp(-a * f * f - 2.0 * a * f * (msp - 1));
    const long m = static_cast<long>(mr);
    long l = aw.start < 0 ? aw.start + m : aw.start;
    for (int t = 0; t < 2 * msp; ++t) {
      aw.w[t] = p * e3[t];
      p *= step;
      aw.idx[t] = static_cast<std::size_t>(l);
      if (++l == m) l = 0;
    }
  }
}

// Point order that walks the fine grid in blocks, which keeps spreading cache friendly.
std::vector<std::size_t> block_order(std::span<const Point3> points, double h, std::size_t mr) {
  constexpr std::size_t kBlock = 8;
  const std::size_t nb = (mr + kBlock - 1) / kBlock;
  std::vector<std::size_t> key(points.size()), count(nb * nb * nb + 1, 0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::size_t k = 0;
    for (int ax = 0; ax < 3; ++ax) {
      auto l = static_cast<std::size_t>(fine_coordinate(points[j][ax], h, mr));
      k = k * nb + std::min(l, mr - 1) / kBlock;
    }
    key[j] = k;
    ++count[k + 1];
  }
  for (std::size_t b = 1; b < count.size(); ++b) count[b] += count[b - 1];
  std::vector<std::size_t> order(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) order[count[key[j]]++] = j;
  return order;
}

inline std::size_t wrap(long l, std::size_t mr) {
  long m = static_cast<long>(mr);
  l %= m;
  return static_cast<std::size_t>(l < 0 ? l + m : l);
}

}  // namespace

void Nufft::type1(std::span<const Point3> points, std::span<const Complex> coeffs, std::span<Complex> out) const {
  if (points.size() != coeffs.size()) fail(ErrorKind::DimensionMismatch, "points and coefficients differ in length");
  if (points.empty()) fail(ErrorKind::InvalidInput, "type-1 transform needs at least one point");
  if (out.size() != modes_.count()) fail(ErrorKind::DimensionMismatch, "output size must equal the mode count");
  check_points(points);

  const std::size_t mr = mr_, plane = mr * mr * mr;
  const int width = 2 * msp_;
  auto block = fft::alloc_real(2 * plane);
  std::memset(block.get(), 0, 2 * plane * sizeof(double));
  double* re = block.get();
  double* im = re + plane;
  const auto& k = simd::active();
  const auto order = block_order(points, modes_.h, mr);

  // Each slab of the first axis is owned by one worker and receives
  // contributions in point order, so sums do not depend on the thread count.
  const std::size_t slabs = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), mr);
  parallel_for(slabs, [&](std::size_t s) {
    const std::size_t lo = s * mr / slabs, hi = (s + 1) * mr / slabs;
    PointWeights pw;
    for (std::size_t j : order) {
      const Complex c = coeffs[j];
      if (c == Complex(0.0, 0.0)) continue;
      kernel_weights(points[j], modes_.h, mr, msp_, gauss_a_, gauss_e3_.data(), pw);
      const AxisWeights &w0 = pw.axis[0], &w1 = pw.axis[1], &w2 = pw.axis[2];
      const std::size_t z0 = w2.idx[0];
      const std::size_t first = std::min<std::size_t>(static_cast<std::size_t>(width), mr - z0);
      for (int t0 = 0; t0 < width; ++t0) {
        const std::size_t l0 = w0.idx[t0];
        if (l0 < lo || l0 >= hi) continue;
        for (int t1 = 0; t1 < width; ++t1) {
          const std::size_t l1 = w1.idx[t1];
          const double f = w0.w[t0] * w1.w[t1];
          const std::size_t row = (l0 * mr + l1) * mr;
          const double ar = c.real() * f, ai = c.imag() * f;
          k.axpy2(ar, ai, w2.w.data(), re + row + z0, im + row + z0, first);
          if (first < static_cast<std::size_t>(width))
            k.axpy2(ar, ai, w2.w.data() + first, re + row, im + row, width - first);
        }
      }
    }
  });

  fftw_execute_split_dft(plans_->forward, re, im, re, im);

  const std::size_t mm = modes_.per_axis();
  const long M = modes_.m_half;
  const double inv_n = 1.0 / static_cast<double>(points.size());
  for (std::size_t i0 = 0; i0 < mm; ++i0) {
    const std::size_t k0 = wrap(static_cast<long>(i0) - M, mr);
    for (std::size_t i1 = 0; i1 < mm; ++i1) {
      const std::size_t k1 = wrap(static_cast<long>(i1) - M, mr);
      const double d01 = deconv_[i0] * deconv_[i1] * inv_n;
      for (std::size_t i2 = 0; i2 < mm; ++i2) {
        const std::size_t k2 = wrap(static_cast<long>(i2) - M, mr);
        const std::size_t g = (k0 * mr + k1) * mr + k2;
        const double d = d01 * deconv_[i2];
        out[(i0 * mm + i1) * mm + i2] = Complex(re[g] * d, im[g] * d);
      }
    }
  }
}

void Nufft::type2(std::span<const Complex> spectral, std::span<const Point3> points, std::span<Complex> out) const {
  if (spectral.size() != modes_.count()) fail(ErrorKind::DimensionMismatch, "spectral size must equal the mode count");
  if (out.size() != points.size()) fail(ErrorKind::DimensionMismatch, "output size must equal the point count");
  check_points(points);

  const std::size_t mr = mr_, plane = mr * mr * mr;
  const int width = 2 * msp_;
  auto block = fft::alloc_real(2 * plane);
  std::memset(block.get(), 0, 2 * plane * sizeof(double));
  double* re = block.get();
  double* im = re + plane;

  const std::size_t mm = modes_.per_axis();
  const long M = modes_.m_half;
  for (std::size_t i0 = 0; i0 < mm; ++i0) {
    const std::size_t k0 = wrap(static_cast<long>(i0) - M, mr);
    for (std::size_t i1 = 0; i1 < mm; ++i1) {
      const std::size_t k1 = wrap(static_cast<long>(i1) - M, mr);
      const double d01 = deconv_[i0] * deconv_[i1];
      for (std::size_t i2 = 0; i2 < mm; ++i2) {
        const std::size_t k2 = wrap(static_cast<long>(i2) - M, mr);
        const std::size_t g = (k0 * mr + k1) * mr + k2;
        const Complex v = spectral[(i0 * mm + i1) * mm + i2] * (d01 * deconv_[i2]);
        re[g] = v.real();
        im[g] = v.imag();
      }
    }
  }

  fftw_execute_split_dft(plans_->backward, im, re, im, re);

  const auto& k = simd::active();
  const auto order = block_order(points, modes_.h, mr);
  const std::size_t chunk = 1024;
  const std::size_t chunks = (points.size() + chunk - 1) / chunk;
  parallel_for(chunks, [&](std::size_t c) {
    PointWeights pw;
    const std::size_t hi = std::min(points.size(), (c + 1) * chunk);
    for (std::size_t q = c * chunk; q < hi; ++q) {
      const std::size_t j = order[q];
      kernel_weights(points[j], modes_.h, mr, msp_, gauss_a_, gauss_e3_.data(), pw);
      const AxisWeights &w0 = pw.axis[0], &w1 = pw.axis[1], &w2 = pw.axis[2];
      const std::size_t z0 = w2.idx[0];
      const std::size_t first = std::min<std::size_t>(static_cast<std::size_t>(width), mr - z0);
      double sr = 0.0, si = 0.0;
      for (int t0 = 0; t0 < width; ++t0) {
        const std::size_t l0 = w0.idx[t0];
        double r0 = 0.0, i0 = 0.0;
        for (int t1 = 0; t1 < width; ++t1) {
          const std::size_t l1 = w1.idx[t1];
          const std::size_t row = (l0 * mr + l1) * mr;
          double acc[2];
          k.dot2(w2.w.data(), re + row + z0, im + row + z0, first, acc);
          if (first < static_cast<std::size_t>(width)) {
            double rest[2];
            k.dot2(w2.w.data() + first, re + row, im + row, width - first, rest);
            acc[0] += rest[0];
            acc[1] += rest[1];
          }
          r0 += w1.w[t1] * acc[0];
          i0 += w1.w[t1] * acc[1];
        }
        sr += w0.w[t0] * r0;
        si += w0.w[t0] * i0;
      }
      out[j] = Complex(sr, si);
    }
  });
}

std::vector<Complex> nufft_type1(std::span<const Point3> points, std::span<const Complex> coeffs, const ModeGrid& modes,
                                 double tol) {
  Nufft plan(modes, tol);
  std::vector<Complex> out(modes.count());
  plan.type1(points, coeffs, out);
  return out;
}

std::vector<Complex> nufft_type2(std::span<const Complex> spectral, std::span<const Point3> points,
                                 const ModeGrid& modes, double tol) {
  Nufft plan(modes, tol);
  std::vector<Complex> out(points.size());
  plan.type2(spectral, points, out);
  return out;
}

namespace {

void direct_guard(std::size_t n, const ModeGrid& modes) {
  modes.validate();
  if (static_cast<double>(n) * static_cast<double>(modes.count()) > 1e8)
    fail(ErrorKind::OutOfRange, "direct summation limited to N*(2M)^3 <= 1e8");
}

// exp(i*s*m*h*x) for m = -M..M-1
void phases(double hx, int M, double sign, std::vector<Complex>& out) {
  out.resize(2 * static_cast<std::size_t>(M));
  for (int m = -M; m < M; ++m) out[m + M] = std::polar(1.0, sign * m * hx);
}

}  // namespace

std::vector<Complex> direct_type1(std::span<const Point3> points, std::span<const Complex> coeffs,
                                  const ModeGrid& modes) {
  if (points.size() != coeffs.size()) fail(ErrorKind::DimensionMismatch, "points and coefficients differ in length");
  if (points.empty()) fail(ErrorKind::InvalidInput, "type-1 transform needs at least one point");
  direct_guard(points.size(), modes);
  const std::size_t mm = modes.per_axis();
  std::vector<Complex> out(modes.count());
  std::vector<Complex> e0, e1, e2;
  for (std::size_t j = 0; j < points.size(); ++j) {
    phases(modes.h * points[j][0], modes.m_half, -1.0, e0);
    phases(modes.h * points[j][1], modes.m_half, -1.0, e1);
    phases(modes.h * points[j][2], modes.m_half, -1.0, e2);
    for (std::size_t a = 0; a < mm; ++a)
      for (std::size_t b = 0; b < mm; ++b) {
        Complex cab = coeffs[j] * e0[a] * e1[b];
        Complex* row = out.data() + (a * mm + b) * mm;
        for (std::size_t c = 0; c < mm; ++c) row[c] += cab * e2[c];
      }
  }
  const double inv_n = 1.0 / static_cast<double>(points.size());
  for (auto& v : out) v *= inv_n;
  return out;
}

std::vector<Complex> direct_type2(std::span<const Complex> spectral, std::span<const Point3> points,
                                  const ModeGrid& modes) {
  if (spectral.size() != modes.count()) fail(ErrorKind::DimensionMismatch, "spectral size must equal the mode count");
  direct_guard(points.size(), modes);
  const std::size_t mm = modes.per_axis();
  std::vector<Complex> out(points.size());
  std::vector<Complex> e0, e1, e2;
  for (std::size_t j = 0; j < points.size(); ++j) {
    phases(modes.h * points[j][0], modes.m_half, 1.0, e0);
    phases(modes.h * points[j][1], modes.m_half, 1.0, e1);
    phases(modes.h * points[j][2], modes.m_half, 1.0, e2);
    Complex s = 0.0;
    for (std::size_t a = 0; a < mm; ++a)
      for (std::size_t b = 0; b < mm; ++b) {
        const Complex* row = spectral.data() + (a * mm + b) * mm;
        Complex t = 0.0;
        for (std::size_t c = 0; c < mm; ++c) t += row[c] * e2[c];
        s += t * e0[a] * e1[b];
      }
    out[j] = s;
  }
  return out;
}

}  // namespace mbo
