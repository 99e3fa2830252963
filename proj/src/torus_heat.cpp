#include "mbo/torus_heat.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "mbo/error.hpp"
#include "mbo/fft.hpp"
#include "mbo/parallel.hpp"
#include "mbo/simd/kernels.hpp"

namespace mbo {

double heat_multiplier(std::span<const long> k, double tau, std::span<const double> extent) {
  if (!(tau > 0.0)) fail(ErrorKind::InvalidInput, "tau must be positive");
  if (k.size() != extent.size()) fail(ErrorKind::DimensionMismatch, "mode and extent dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    double q = static_cast<double>(k[i]) / extent[i];
    s += q * q;
  }
  return std::exp(-4.0 * std::numbers::pi * std::numbers::pi * tau * s);
}

struct TorusDiffuser::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(fft::planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

TorusDiffuser::TorusDiffuser(const GridSpec& grid, double tau) : grid_(grid), tau_(tau) {
  grid_.validate();
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorKind::InvalidInput, "tau must be positive");
  const int d = grid_.d;
  int dims[3];
  for (int a = 0; a < d; ++a) dims[a] = static_cast<int>(grid_.sizes[a]);
  const std::size_t last_half = grid_.sizes[d - 1] / 2 + 1;
  spectrum_size_ = last_half;
  for (int a = 0; a < d - 1; ++a) spectrum_size_ *= grid_.sizes[a];

  const double inv_n = 1.0 / static_cast<double>(grid_.count());
  scaled_multipliers_.resize(spectrum_size_);
  std::vector<long> k(d);
  std::vector<double> ext(grid_.extent.begin(), grid_.extent.begin() + d);
  for (std::size_t idx = 0; idx < spectrum_size_; ++idx) {
    std::size_t rem = idx;
    for (int a = d - 1; a >= 0; --a) {
      std::size_t len = a == d - 1 ? last_half : grid_.sizes[a];
      long ka = static_cast<long>(rem % len);
      rem /= len;
      long na = static_cast<long>(grid_.sizes[a]);
      k[a] = 2 * ka > na ? ka - na : ka;
    }
    scaled_multipliers_[idx] = heat_multiplier(k, tau, ext) * inv_n;
  }

  plans_ = std::make_unique<Plans>();
  auto in = fft::alloc_real(grid_.count());
  auto out = fft::alloc_complex(spectrum_size_);
  std::lock_guard<std::mutex> lock(fft::planner_mutex());
  plans_->forward = fftw_plan_dft_r2c(d, dims, in.get(), reinterpret_cast<fftw_complex*>(out.get()), FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_c2r(d, dims, reinterpret_cast<fftw_complex*>(out.get()), in.get(), FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) fail(ErrorKind::InvalidInput, "FFT planning failed");
}

TorusDiffuser::~TorusDiffuser() = default;

void TorusDiffuser::apply_plane(double* plane) const {
  const std::size_t n = grid_.count();
  auto real = fft::alloc_real(n);
  auto spec = fft::alloc_complex(spectrum_size_);
  std::memcpy(real.get(), plane, n * sizeof(double));
  fftw_execute_dft_r2c(plans_->forward, real.get(), reinterpret_cast<fftw_complex*>(spec.get()));
  simd::active().scale_complex(scaled_multipliers_.data(), spec.get(), spectrum_size_);
  fftw_execute_dft_c2r(plans_->backward, reinterpret_cast<fftw_complex*>(spec.get()), real.get());
  std::memcpy(plane, real.get(), n * sizeof(double));
}

MatrixField TorusDiffuser::apply(const MatrixField& f) const {
  if (!f.is_grid()) fail(ErrorKind::Contract, "torus diffusion needs a grid-backed field");
  if (!(f.grid() == grid_)) fail(ErrorKind::DimensionMismatch, "field grid differs from diffuser grid");
  MatrixField out = f;
  parallel_for(static_cast<std::size_t>(out.components()),
               [&](std::size_t e) { apply_plane(out.component(static_cast<int>(e))); });
  return out;
}

MatrixField diffuse_torus(const MatrixField& f, double tau) {
  if (!f.is_grid()) fail(ErrorKind::Contract, "torus diffusion needs a grid-backed field");
  return TorusDiffuser(f.grid(), tau).apply(f);
}

}  // namespace mbo
