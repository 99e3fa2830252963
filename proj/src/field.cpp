#include "mbo/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "mbo/error.hpp"

namespace mbo {

GridSpec GridSpec::torus2(std::size_t size, double length) {
  GridSpec g;
  g.d = 2;
  g.sizes = {size, size, 1};
  g.extent = {length, length, 1.0};
  g.validate();
  return g;
}

std::size_t GridSpec::count() const {
  std::size_t c = 1;
  for (int a = 0; a < d; ++a) c *= sizes[a];
  return c;
}

double GridSpec::cell_measure() const {
  double m = 1.0;
  for (int a = 0; a < d; ++a) m *= dx(a);
  return m;
}

double GridSpec::measure() const {
  double m = 1.0;
  for (int a = 0; a < d; ++a) m *= extent[a];
  return m;
}

void GridSpec::validate() const {
  if (d < 1 || d > 3) fail(ErrorKind::InvalidInput, "grid dimension must be 1..3");
  for (int a = 0; a < d; ++a) {
    if (sizes[a] < 8) fail(ErrorKind::InvalidInput, "grid needs at least 8 points per axis");
    if (!(extent[a] > 0.0) || !std::isfinite(extent[a])) fail(ErrorKind::InvalidInput, "grid extent must be positive");
  }
}

MatrixField MatrixField::on_grid(const GridSpec& grid, int n) {
  grid.validate();
  MatrixField f;
  SmallMatrix probe(n);
  f.n_ = probe.n();
  f.grid_ = grid;
  f.count_ = grid.count();
  f.data_.assign(f.count_ * static_cast<std::size_t>(n * n), 0.0);
  return f;
}

MatrixField MatrixField::on_cloud(std::shared_ptr<const CloudLayout> cloud, int n) {
  if (!cloud) fail(ErrorKind::InvalidInput, "null cloud layout");
  if (cloud->positions.size() != cloud->weights.size())
    fail(ErrorKind::DimensionMismatch, "cloud positions and weights differ in length");
  for (double w : cloud->weights)
    if (!(w > 0.0)) fail(ErrorKind::InvalidInput, "cloud weights must be positive");
  MatrixField f;
  SmallMatrix probe(n);
  f.n_ = probe.n();
  f.count_ = cloud->positions.size();
  f.cloud_ = std::move(cloud);
  f.data_.assign(f.count_ * static_cast<std::size_t>(n * n), 0.0);
  return f;
}

MatrixField MatrixField::like(const MatrixField& other) {
  MatrixField f;
  f.n_ = other.n_;
  f.count_ = other.count_;
  f.grid_ = other.grid_;
  f.cloud_ = other.cloud_;
  f.data_.assign(other.data_.size(), 0.0);
  return f;
}

const GridSpec& MatrixField::grid() const {
  if (cloud_) fail(ErrorKind::Contract, "field is not grid-backed");
  return grid_;
}

const CloudLayout& MatrixField::cloud() const {
  if (!cloud_) fail(ErrorKind::Contract, "field is not cloud-backed");
  return *cloud_;
}

bool MatrixField::same_layout(const MatrixField& o) const {
  if (n_ != o.n_ || count_ != o.count_) return false;
  if (cloud_ || o.cloud_) return cloud_ == o.cloud_;
  return grid_ == o.grid_;
}

double MatrixField::weight(std::size_t i) const { return cloud_ ? cloud_->weights[i] : grid_.cell_measure(); }

double MatrixField::total_measure() const {
  if (!cloud_) return grid_.cell_measure() * static_cast<double>(count_);
  double s = 0.0;
  for (double w : cloud_->weights) s += w;
  return s;
}

SmallMatrix MatrixField::at(std::size_t i) const {
  SmallMatrix m(n_);
  for (int e = 0; e < n_ * n_; ++e) m.data()[e] = data_[static_cast<std::size_t>(e) * count_ + i];
  return m;
}

void MatrixField::set(std::size_t i, const SmallMatrix& m) {
  if (m.n() != n_) fail(ErrorKind::DimensionMismatch, "matrix dimension differs from field");
  for (int e = 0; e < n_ * n_; ++e) data_[static_cast<std::size_t>(e) * count_ + i] = m.data()[e];
}

void MatrixField::fill(const SmallMatrix& m) {
  for (std::size_t i = 0; i < count_; ++i) set(i, m);
}

double MatrixField::max_orthogonality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < count_; ++i) worst = std::max(worst, orthogonality_defect(at(i)));
  return worst;
}

namespace {

void require_orthogonal(const MatrixField& f) {
  if (!f.is_orthogonal(1e-8)) fail(ErrorKind::Contract, "field is not orthogonal-valued");
}

bool positive(const MatrixField& f, std::size_t i) { return det(f.at(i)) > 0.0; }

std::vector<char> sign_mask(const MatrixField& f) {
  std::vector<char> s(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) s[i] = positive(f, i) ? 1 : 0;
  return s;
}

}  // namespace

double plus_volume(const MatrixField& f) {
  require_orthogonal(f);
  double v = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (positive(f, i)) v += f.weight(i);
  return v;
}

double max_pointwise_change(const MatrixField& a, const MatrixField& b) {
  if (!a.same_layout(b)) fail(ErrorKind::DimensionMismatch, "fields have different layouts");
  double worst = 0.0;
  int ne = a.components();
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (int e = 0; e < ne; ++e) {
      double d = a.component(e)[i] - b.component(e)[i];
      s += d * d;
    }
    worst = std::max(worst, s);
  }
  return std::sqrt(worst);
}

std::size_t sign_flips(const MatrixField& a, const MatrixField& b) {
  if (!a.same_layout(b)) fail(ErrorKind::DimensionMismatch, "fields have different layouts");
  std::size_t flips = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (positive(a, i) != positive(b, i)) ++flips;
  return flips;
}

double max_deviation_from_mean(const MatrixField& f) {
  double worst = 0.0;
  for (int e = 0; e < f.components(); ++e) {
    const double* c = f.component(e);
    double mean = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      mean += f.weight(i) * c[i];
      wsum += f.weight(i);
    }
    mean /= wsum;
    for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(c[i] - mean));
  }
  return worst;
}

WindingPair winding_pair(const MatrixField& f) {
  const GridSpec& g = f.grid();
  if (g.d != 2 || f.n() != 2) fail(ErrorKind::Contract, "winding_pair needs an n=2 field on a 2D grid");
  require_orthogonal(f);
  const std::size_t nx = g.sizes[0], ny = g.sizes[1];
  auto angle = [&](std::size_t ix, std::size_t iy) {
    std::size_t i = ix * ny + iy;
    return std::atan2(f.component(2)[i], f.component(0)[i]);
  };
  auto loop = [&](std::size_t len, auto at) {
    double total = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      double step = std::remainder(at((k + 1) % len) - at(k), 2.0 * std::numbers::pi);
      if (std::abs(step) >= 0.5 * std::numbers::pi) fail(ErrorKind::UnderResolved, "winding loop is under-resolved");
      total += step;
    }
    return std::lround(total / (2.0 * std::numbers::pi));
  };
  WindingPair w;
  w.ix = loop(nx, [&](std::size_t k) { return angle(k, ny / 2); });
  w.iy = loop(ny, [&](std::size_t k) { return angle(nx / 2, k); });
  return w;
}

std::vector<CellIndex> interface_cells(const MatrixField& f) {
  const GridSpec& g = f.grid();
  require_orthogonal(f);
  std::vector<char> s = sign_mask(f);
  std::array<std::size_t, 3> n{1, 1, 1};
  for (int a = 0; a < g.d; ++a) n[a] = g.sizes[a];
  std::vector<CellIndex> out;
  for (std::size_t i0 = 0; i0 < n[0]; ++i0)
    for (std::size_t i1 = 0; i1 < n[1]; ++i1)
      for (std::size_t i2 = 0; i2 < n[2]; ++i2) {
        std::size_t here = (i0 * n[1] + i1) * n[2] + i2;
        bool cut = false;
        for (int a = 0; a < g.d && !cut; ++a) {
          CellIndex j{i0, i1, i2};
          j[a] = (j[a] + 1) % n[a];
          std::size_t there = (j[0] * n[1] + j[1]) * n[2] + j[2];
          cut = s[here] != s[there];
        }
        if (cut) out.push_back({i0, i1, i2});
      }
  return out;
}

RegionStats plus_region_stats(const MatrixField& f) {
  RegionStats r;
  r.area = plus_volume(f);
  r.perimeter = static_cast<double>(interface_cells(f).size()) * f.grid().dx(0);
  if (r.area > 0.0 && r.perimeter > 0.0)
    r.isoperimetric_ratio = r.perimeter * r.perimeter / (4.0 * std::numbers::pi * r.area);
  return r;
}

void EnergyLog::push(const EnergyRow& row) {
  if (!rows_.empty() && row.iter <= rows_.back().iter)
    fail(ErrorKind::Contract, "energy log iterations must increase");
  rows_.push_back(row);
}

std::string EnergyLog::csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "iter,energy,plus_volume,max_change,sign_flips\n";
  for (const auto& r : rows_)
    os << r.iter << ',' << r.energy << ',' << r.plus_volume << ',' << r.max_change << ',' << r.sign_flips << '\n';
  return os.str();
}

void EnergyLog::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << csv();
  if (!out) fail(ErrorKind::Io, "write failed: " + path);
}

namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    auto c = static_cast<const std::uint8_t*>(p);
    buf.insert(buf.end(), c, c + n);
  }
  template <class T>
  void le(T v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(T));
    for (std::size_t k = 0; k < sizeof(T); ++k) buf.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  std::vector<std::uint8_t> buf;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : buf(b) {}
  template <class T>
  T le() {
    if (pos + sizeof(T) > buf.size()) fail(ErrorKind::Format, "snapshot truncated");
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) bits |= static_cast<std::uint64_t>(buf[pos + k]) << (8 * k);
    pos += sizeof(T);
    T v;
    std::memcpy(&v, &bits, sizeof(T));
    return v;
  }
  std::size_t remaining() const { return buf.size() - pos; }
  const std::vector<std::uint8_t>& buf;
  std::size_t pos = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const MatrixField& f) {
  Writer w;
  w.bytes("MBOF", 4);
  w.le<std::uint32_t>(1);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(f.n()));
  if (f.is_grid()) {
    const GridSpec& g = f.grid();
    w.le<std::uint8_t>(0);
    w.le<std::uint32_t>(static_cast<std::uint32_t>(g.d));
    for (int a = 0; a < g.d; ++a) w.le<std::uint64_t>(g.sizes[a]);
    for (int a = 0; a < g.d; ++a) w.le<double>(g.extent[a]);
  } else {
    const CloudLayout& c = f.cloud();
    w.le<std::uint8_t>(1);
    w.le<std::uint64_t>(c.positions.size());
    for (std::size_t i = 0; i < c.positions.size(); ++i) {
      for (double x : c.positions[i]) w.le<double>(x);
      w.le<double>(c.weights[i]);
    }
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    for (int e = 0; e < f.components(); ++e) w.le<double>(f.component(e)[i]);
  return std::move(w.buf);
}

MatrixField decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "MBOF", 4) != 0) fail(ErrorKind::Format, "bad magic bytes");
  Reader r(bytes);
  r.pos = 4;
  if (r.le<std::uint32_t>() != 1) fail(ErrorKind::Format, "unsupported snapshot version");
  auto n = r.le<std::uint32_t>();
  if (n < 1 || n > static_cast<std::uint32_t>(kMaxDim)) fail(ErrorKind::Format, "unsupported matrix dimension");
  auto flavor = r.le<std::uint8_t>();
  MatrixField f;
  if (flavor == 0) {
    GridSpec g;
    g.d = static_cast<int>(r.le<std::uint32_t>());
    if (g.d < 1 || g.d > 3) fail(ErrorKind::Format, "bad grid dimension");
    for (int a = 0; a < g.d; ++a) {
      auto s = r.le<std::uint64_t>();
      if (s < 8 || s > (1u << 20)) fail(ErrorKind::Format, "bad grid size");
      g.sizes[a] = s;
    }
    for (int a = 0; a < g.d; ++a) g.extent[a] = r.le<double>();
    try {
      g.validate();
    } catch (const Error& e) {
      fail(ErrorKind::Format, e.what());
    }
    if (r.remaining() != g.count() * n * n * 8) fail(ErrorKind::Format, "snapshot payload size mismatch");
    f = MatrixField::on_grid(g, static_cast<int>(n));
  } else if (flavor == 1) {
    auto count = r.le<std::uint64_t>();
    if (count > r.remaining() / 32) fail(ErrorKind::Format, "bad point count");
    auto cloud = std::make_shared<CloudLayout>();
    cloud->positions.resize(count);
    cloud->weights.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      for (double& x : cloud->positions[i]) x = r.le<double>();
      cloud->weights[i] = r.le<double>();
      if (!(cloud->weights[i] > 0.0)) fail(ErrorKind::Format, "non-positive point weight");
    }
    if (r.remaining() != count * n * n * 8) fail(ErrorKind::Format, "snapshot payload size mismatch");
    f = MatrixField::on_cloud(std::move(cloud), static_cast<int>(n));
  } else {
    fail(ErrorKind::Format, "unknown layout flavor");
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    for (int e = 0; e < f.components(); ++e) {
      double v = r.le<double>();
      if (!std::isfinite(v)) fail(ErrorKind::Format, "non-finite matrix entry");
      f.component(e)[i] = v;
    }
  return f;
}

void write_snapshot(const std::string& path, const MatrixField& f) {
  auto bytes = encode_snapshot(f);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write failed: " + path);
}

MatrixField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace mbo
