#pragma once

#include <array>
#include <memory>
#include <vector>

#include "mbo/diffuser.hpp"
#include "mbo/field.hpp"
#include "mbo/nufft.hpp"
#include "mbo/surface.hpp"

namespace mbo {

// Gaussian mass outside a ball: (2x/sqrt(pi)) e^{-x^2} + erfc(x).
double tail_T(double x);

enum class TailModel {
  kFull,         // tail_T as above
  kLeadingTerm,  // (2x/sqrt(pi)) e^{-x^2} alone; reproduces the reference band-width table
};

// w_b with T(w_b / (2 sqrt(tau))) = eps.
double band_width(double tau, double eps, TailModel model = TailModel::kFull);

ModeGrid spectral_grid(double tau, double eps, double radius);

struct BandSpec {
  double dx = 0.05;
  double w_b = 0.0;
  int p = 3;
  double eps = 1e-6;
  void validate() const;
};

// Grid points sit on the lattice dx*Z^3, so bands of different width share cells.
struct BandSet {
  BandSpec spec;
  std::vector<std::array<long, 3>> cells;
  std::vector<double> cell_distance;
  // p^3 entries per cell, cell-major.
  std::vector<Point3> quad_points;
  std::vector<double> quad_weights;
  // positions: closest points of quad_points; weights: surface measure per point.
  std::shared_ptr<const CloudLayout> cloud;

  std::size_t n_q() const { return quad_points.size(); }
  const std::vector<Point3>& closest() const { return cloud->positions; }
};

BandSet build_band(const Surface& surface, const BandSpec& spec);

// Heat flow on the surface by convolving the closest-point extension with the
// free-space kernel, evaluated with a type-1/type-2 NUFFT pair.
class SurfaceDiffuser : public Diffuser {
 public:
  SurfaceDiffuser(std::shared_ptr<const BandSet> band, double tau, double eps);
  ~SurfaceDiffuser() override;

  double tau() const override { return tau_; }
  MatrixField apply(const MatrixField& f) const override;

  // Diffuses two scalar fields (indexed like the band's cloud) at once.
  void apply_pair(const double* a, const double* b, double* out_a, double* out_b) const;
  void apply_scalar(const double* a, double* out) const;

  const ModeGrid& modes() const { return modes_; }
  double scale() const { return scale_; }
  double calibration() const { return calibration_; }
  const BandSet& band() const { return *band_; }

 private:
  std::shared_ptr<const BandSet> band_;
  double tau_;
  double eps_;
  double scale_ = 1.0;
  ModeGrid modes_;
  std::unique_ptr<Nufft> nufft_;
  std::vector<Point3> sources_;
  std::vector<Point3> targets_;
  std::vector<double> multipliers_;
  double constant_ = 1.0;
  double calibration_ = 1.0;
};

MatrixField diffuse_surface(std::shared_ptr<const BandSet> band, const MatrixField& f, double tau, double eps);

}  // namespace mbo
