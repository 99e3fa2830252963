#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "mbo/error.hpp"
#include "mbo/parallel.hpp"
#include "mbo/torus_heat.hpp"
#include "support.hpp"

using namespace mbo;

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic 1D heat kernel on the unit circle, summed over images.
double periodic_gauss(double x, double tau) {
  double s = 0.0;
  for (int j = -6; j <= 6; ++j) {
    double d = x + j;
    s += std::exp(-d * d / (4.0 * tau));
  }
  return s / std::sqrt(4.0 * kPi * tau);
}

MatrixField random_angle_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  MatrixField f = MatrixField::on_grid(GridSpec::torus2(n), 2);
  for (std::size_t i = 0; i < f.size(); ++i)
    f.set(i, (rng() & 1) ? SmallMatrix::rotation2(u(rng)) : SmallMatrix::reflection2(u(rng)));
  return f;
}

}  // namespace

TEST_CASE("heat multiplier values") {
  std::vector<double> L{1.0, 1.0};
  std::vector<long> zero{0, 0}, k10{1, 0};
  CHECK(heat_multiplier(zero, 0.3, L) == 1.0);
  CHECK(heat_multiplier(k10, 1.0 / (4.0 * kPi * kPi), L) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  std::vector<double> L2{2.0, 1.0};
  CHECK(heat_multiplier(k10, 1.0 / (kPi * kPi), L2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("multiplier equals the DFT of the sampled periodic Gaussian") {
  const std::size_t n = 256;
  const double tau = 0.0078125, dx = 1.0 / n;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = periodic_gauss(static_cast<double>(i) * dx, tau) * dx;
  std::vector<double> ghat(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += g[i] * std::polar(1.0, -2.0 * kPi * double(k * i % n) / double(n));
    ghat[k] = s.real();
  }
  std::vector<double> L{1.0, 1.0};
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      long ka = a <= n / 2 ? long(a) : long(a) - long(n);
      long kb = b <= n / 2 ? long(b) : long(b) - long(n);
      std::vector<long> k{ka, kb};
      worst = std::max(worst, std::abs(heat_multiplier(k, tau, L) - ghat[a] * ghat[b]));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("diffusion matches direct periodic convolution") {
  const std::size_t n = 64;
  const double tau = 0.002, dx = 1.0 / n;
  MatrixField f = random_angle_field(n, 4);
  MatrixField out = diffuse_torus(f, tau);
  std::mt19937_64 rng(1);
  for (int probe = 0; probe < 20; ++probe) {
    std::size_t ix = rng() % n, iy = rng() % n;
    for (int e = 0; e < 4; ++e) {
      double s = 0.0;
      for (std::size_t jx = 0; jx < n; ++jx)
        for (std::size_t jy = 0; jy < n; ++jy) {
          double gx = periodic_gauss((double(ix) - double(jx)) * dx, tau);
          double gy = periodic_gauss((double(iy) - double(jy)) * dx, tau);
          s += gx * gy * dx * dx * f.component(e)[jx * n + jy];
        }
      CHECK(out.component(e)[ix * n + iy] == doctest::Approx(s).epsilon(1e-10));
    }
  }
}

TEST_CASE("constant field and single mode") {
  MatrixField c = MatrixField::on_grid(GridSpec::torus2(32), 2);
  c.fill(SmallMatrix::rotation2(0.7));
  MatrixField dc = diffuse_torus(c, 0.05);
  CHECK(max_pointwise_change(c, dc) <= 1e-13);

  const std::size_t n = 128;
  GridSpec g = GridSpec::torus2(n);
  TorusDiffuser d(g, 0.01);
  std::vector<double> plane(g.count());
  for (std::size_t ix = 0; ix < n; ++ix)
    for (std::size_t iy = 0; iy < n; ++iy) plane[ix * n + iy] = std::sin(2.0 * kPi * g.coord(0, ix));
  auto before = plane;
  d.apply_plane(plane.data());
  const double decay = std::exp(-4.0 * kPi * kPi * 0.01);
  for (std::size_t i = 0; i < plane.size(); ++i) CHECK(plane[i] == doctest::Approx(decay * before[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("semigroup and mass conservation") {
  MatrixField f = random_angle_field(64, 8);
  MatrixField a = diffuse_torus(diffuse_torus(f, 0.001), 0.002);
  MatrixField b = diffuse_torus(f, 0.003);
  CHECK(max_pointwise_change(a, b) <= 1e-10);
  for (int e = 0; e < 4; ++e) {
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      m0 += f.component(e)[i];
      m1 += b.component(e)[i];
    }
    CHECK(std::abs(m0 - m1) / f.size() <= 1e-12);
  }
}

TEST_CASE("maximum principle diagnostics") {
  MatrixField f = random_angle_field(128, 12);
  for (double tau : {1e-4, 1e-3, 1e-2}) {
    MatrixField d = diffuse_torus(f, tau);
    double worst_norm = 0.0, worst_det = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      SmallMatrix a = d.at(i);
      worst_norm = std::max(worst_norm, frobenius_norm(a) / std::sqrt(2.0));
      worst_det = std::max(worst_det, std::abs(test::det_direct(a)));
    }
    CHECK(worst_norm <= 1.0 + 1e-9);
    CHECK(worst_det <= 1.0 + 1e-9);
  }
}

TEST_CASE("thread count does not change results") {
  MatrixField f = random_angle_field(64, 21);
  const int saved = thread_count();
  set_thread_count(1);
  MatrixField a = diffuse_torus(f, 0.004);
  set_thread_count(3);
  MatrixField b = diffuse_torus(f, 0.004);
  set_thread_count(saved);
  CHECK(max_pointwise_change(a, b) == 0.0);
}

TEST_CASE("invalid diffusion requests") {
  GridSpec g = GridSpec::torus2(16);
  CHECK_THROWS_AS(TorusDiffuser(g, 0.0), Error);
  CHECK_THROWS_AS(TorusDiffuser(g, -1.0), Error);
  TorusDiffuser d(g, 0.01);
  MatrixField other = MatrixField::on_grid(GridSpec::torus2(32), 2);
  CHECK_THROWS_AS(d.apply(other), Error);
}
