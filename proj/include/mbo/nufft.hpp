#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace mbo {

using Complex = std::complex<double>;
using Point3 = std::array<double, 3>;

// Modes m*h, m in {-M, ..., M-1} per axis. Arrays over modes are stored with
// the last axis fastest: index ((m0+M)*2M + (m1+M))*2M + (m2+M).
struct ModeGrid {
  double h = 1.0;
  int m_half = 1;
  static constexpr int d = 3;

  std::size_t per_axis() const { return 2 * static_cast<std::size_t>(m_half); }
  std::size_t count() const { return per_axis() * per_axis() * per_axis(); }
  void validate() const;
};

// Gaussian gridding with oversampling 2. One instance owns the fine-grid FFT
// plans and can be reused for any point set.
class Nufft {
 public:
  Nufft(const ModeGrid& modes, double tol);
  ~Nufft();
  Nufft(const Nufft&) = delete;
  Nufft& operator=(const Nufft&) = delete;

  const ModeGrid& modes() const { return modes_; }
  int kernel_half_width() const { return msp_; }
  std::size_t fine_size() const { return mr_; }

  // out[m] = (1/N) sum_j c_j exp(-i m h . x_j)
  void type1(std::span<const Point3> points, std::span<const Complex> coeffs, std::span<Complex> out) const;
  // out[n] = sum_m f[m] exp(+i m h . x_n)
  void type2(std::span<const Complex> spectral, std::span<const Point3> points, std::span<Complex> out) const;

 private:
  struct Plans;
  void check_points(std::span<const Point3> points) const;

  ModeGrid modes_;
  double tol_;
  int msp_ = 0;
  std::size_t mr_ = 0;
  double tau_g_ = 0.0;
  double gauss_a_ = 0.0;
  std::vector<double> gauss_e3_;
  std::vector<double> deconv_;  // per axis, indexed by m + M
  std::unique_ptr<Plans> plans_;
};

std::vector<Complex> nufft_type1(std::span<const Point3> points, std::span<const Complex> coeffs, const ModeGrid& modes,
                                 double tol);
std::vector<Complex> nufft_type2(std::span<const Complex> spectral, std::span<const Point3> points,
                                 const ModeGrid& modes, double tol);

std::vector<Complex> direct_type1(std::span<const Point3> points, std::span<const Complex> coeffs,
                                  const ModeGrid& modes);
std::vector<Complex> direct_type2(std::span<const Complex> spectral, std::span<const Point3> points,
                                  const ModeGrid& modes);

}  // namespace mbo
