#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mbo/matgeom.hpp"

namespace mbo {

// Periodic box centred at the origin; point i along an axis sits at -L/2 + i*dx.
// Points are stored in C order (last axis fastest).
struct GridSpec {
  int d = 2;
  std::array<std::size_t, 3> sizes{1, 1, 1};
  std::array<double, 3> extent{1.0, 1.0, 1.0};

  static GridSpec torus2(std::size_t size, double length = 1.0);

  double dx(int axis = 0) const { return extent[axis] / static_cast<double>(sizes[axis]); }
  double coord(int axis, std::size_t i) const { return -0.5 * extent[axis] + static_cast<double>(i) * dx(axis); }
  std::size_t count() const;
  double cell_measure() const;
  double measure() const;
  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

struct CloudLayout {
  std::vector<std::array<double, 3>> positions;
  std::vector<double> weights;
};

class MatrixField {
 public:
  MatrixField() = default;
  static MatrixField on_grid(const GridSpec& grid, int n);
  static MatrixField on_cloud(std::shared_ptr<const CloudLayout> cloud, int n);
  // Same layout and n, all entries zero.
  static MatrixField like(const MatrixField& other);

  int n() const { return n_; }
  int components() const { return n_ * n_; }
  std::size_t size() const { return count_; }
  bool is_grid() const { return !cloud_; }
  const GridSpec& grid() const;
  const CloudLayout& cloud() const;
  const std::shared_ptr<const CloudLayout>& cloud_ptr() const { return cloud_; }
  bool same_layout(const MatrixField& other) const;

  double weight(std::size_t i) const;
  double total_measure() const;

  SmallMatrix at(std::size_t i) const;
  void set(std::size_t i, const SmallMatrix& m);
  void fill(const SmallMatrix& m);

  // Plane of entry (r, c) is component r*n + c.
  double* component(int e) { return data_.data() + static_cast<std::size_t>(e) * count_; }
  const double* component(int e) const { return data_.data() + static_cast<std::size_t>(e) * count_; }

  double max_orthogonality_defect() const;
  bool is_orthogonal(double tol = 1e-10) const { return max_orthogonality_defect() <= tol; }

 private:
  int n_ = 0;
  std::size_t count_ = 0;
  GridSpec grid_{};
  std::shared_ptr<const CloudLayout> cloud_;
  std::vector<double> data_;
};

double plus_volume(const MatrixField& f);
double max_pointwise_change(const MatrixField& a, const MatrixField& b);
std::size_t sign_flips(const MatrixField& a, const MatrixField& b);
// Largest deviation of any entry from the field's spatial mean of that entry.
double max_deviation_from_mean(const MatrixField& f);

struct WindingPair {
  long ix = 0;
  long iy = 0;
  bool operator==(const WindingPair&) const = default;
};
WindingPair winding_pair(const MatrixField& f);

using CellIndex = std::array<std::size_t, 3>;
std::vector<CellIndex> interface_cells(const MatrixField& f);

struct RegionStats {
  double area = 0.0;
  double perimeter = 0.0;
  std::optional<double> isoperimetric_ratio;
};
RegionStats plus_region_stats(const MatrixField& f);

struct EnergyRow {
  long iter = 0;
  double energy = 0.0;
  double plus_volume = 0.0;
  double max_change = 0.0;
  std::size_t sign_flips = 0;
};

class EnergyLog {
 public:
  void push(const EnergyRow& row);
  const std::vector<EnergyRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const EnergyRow& back() const { return rows_.back(); }
  std::string csv() const;
  void write_csv(const std::string& path) const;

 private:
  std::vector<EnergyRow> rows_;
};

void write_snapshot(const std::string& path, const MatrixField& f);
std::vector<std::uint8_t> encode_snapshot(const MatrixField& f);
MatrixField read_snapshot(const std::string& path);
MatrixField decode_snapshot(const std::vector<std::uint8_t>& bytes);

}  // namespace mbo
