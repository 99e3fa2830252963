#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mbo/diffuser.hpp"
#include "mbo/field.hpp"

namespace mbo {

// exp(-4 pi^2 tau sum (k_i/L_i)^2)
double heat_multiplier(std::span<const long> k, double tau, std::span<const double> extent);

class TorusDiffuser : public Diffuser {
 public:
  TorusDiffuser(const GridSpec& grid, double tau);
  ~TorusDiffuser() override;
  TorusDiffuser(const TorusDiffuser&) = delete;
  TorusDiffuser& operator=(const TorusDiffuser&) = delete;

  double tau() const override { return tau_; }
  const GridSpec& grid() const { return grid_; }
  MatrixField apply(const MatrixField& f) const override;
  // In place on one scalar plane of grid().count() values.
  void apply_plane(double* plane) const;

 private:
  struct Plans;
  GridSpec grid_;
  double tau_;
  std::size_t spectrum_size_ = 0;
  std::vector<double> scaled_multipliers_;  // heat multiplier / N, half spectrum
  std::unique_ptr<Plans> plans_;
};

MatrixField diffuse_torus(const MatrixField& f, double tau);

}  // namespace mbo
