#include "mbo/cpm_surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mbo/error.hpp"
#include "mbo/parallel.hpp"

namespace mbo {

namespace {
constexpr double kPi = std::numbers::pi;

double leading_term(double x) { return 2.0 * x / std::sqrt(kPi) * std::exp(-x * x); }
}  // namespace

double tail_T(double x) {
  if (!(x >= 0.0)) fail(ErrorKind::InvalidInput, "tail_T needs x >= 0");
  if (std::isinf(x)) return 0.0;
  return leading_term(x) + std::erfc(x);
}

double band_width(double tau, double eps, TailModel model) {
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorKind::InvalidInput, "band_width needs tau > 0");
  if (!(eps > 0.0 && eps < 0.5)) fail(ErrorKind::OutOfRange, "band_width needs eps in (0, 0.5)");
  auto f = [&](double x) { return model == TailModel::kFull ? tail_T(x) : leading_term(x); };
  // The leading term rises on [0, 1/sqrt 2]; both models decrease beyond it.
  double lo = model == TailModel::kFull ? 0.0 : std::sqrt(0.5);
  double hi = 64.0;
  if (!(f(lo) > eps)) fail(ErrorKind::OutOfRange, "eps too large for the tail model");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > eps)
      lo = mid;
    else
      hi = mid;
  }
  return 2.0 * std::sqrt(tau) * 0.5 * (lo + hi);
}

ModeGrid spectral_grid(double tau, double eps, double radius) {
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorKind::InvalidInput, "spectral_grid needs tau > 0");
  if (!(eps > 0.0 && eps < 0.5)) fail(ErrorKind::OutOfRange, "spectral_grid needs eps in (0, 0.5)");
  if (!(radius > 0.0)) fail(ErrorKind::InvalidInput, "spectral_grid needs R > 0");
  const double lne = std::abs(std::log(eps));
  ModeGrid g;
  g.h = std::min(kPi / radius, kPi / (2.0 * std::sqrt(tau * lne)));
  const double arg = std::abs(std::log(std::sqrt(kPi) * eps / (2.0 * g.h * std::sqrt(tau))));
  g.m_half = static_cast<int>(std::ceil(std::sqrt(arg / tau) / g.h));
  g.m_half = std::max(g.m_half, 1);
  return g;
}

void BandSpec::validate() const {
  if (!(dx > 0.0) || !std::isfinite(dx)) fail(ErrorKind::Config, "band grid spacing must be positive");
  if (p < 1 || p > 8) fail(ErrorKind::Config, "quadrature order must be in [1, 8]");
  if (!(eps > 0.0 && eps < 0.5)) fail(ErrorKind::Config, "band accuracy must lie in (0, 0.5)");
  if (!(w_b > dx)) fail(ErrorKind::Config, "band width must exceed the grid spacing");
}

namespace {

double box_distance(const Box3& b, const Point3& x) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    double d = std::max({b.lo[a] - x[a], 0.0, x[a] - b.hi[a]});
    s += d * d;
  }
  return std::sqrt(s);
}

// Extent of the band on the inner and outer side of the surface, clipped at
// the focal distances where the normal lines cross.
double thickness(const SurfacePoint& sp, double w_b) {
  double inner = w_b, outer = w_b;
  for (double k : {sp.k1, sp.k2}) {
    if (k > 0.0) inner = std::min(inner, 1.0 / k);
    if (k < 0.0) outer = std::min(outer, -1.0 / k);
  }
  return inner + outer;
}

// Inner and outer normal extents of a revolution surface sampled along the
// profile. A normal segment ends where its points stop projecting back to
// its foot, which also catches the cut locus between distant sheets.
struct ExtentTable {
  double t0 = 0.0, t1 = 1.0;
  std::vector<std::array<double, 2>> ext;

  double operator()(double t) const {
    double u = (t - t0) / (t1 - t0) * static_cast<double>(ext.size() - 1);
    u = std::clamp(u, 0.0, static_cast<double>(ext.size() - 1));
    std::size_t i = std::min(static_cast<std::size_t>(u), ext.size() - 2);
    double f = u - static_cast<double>(i);
    return (1.0 - f) * (ext[i][0] + ext[i][1]) + f * (ext[i + 1][0] + ext[i + 1][1]);
  }
};

ExtentTable extent_table(const Surface& surface, double w_b, std::size_t samples) {
  const RevolutionProfile& prof = surface.profile();
  ExtentTable tab;
  tab.t0 = prof.t0;
  tab.t1 = prof.t1;
  tab.ext.resize(samples);
  parallel_for(samples, [&](std::size_t i) {
    double t = prof.t0 + (prof.t1 - prof.t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    Jet jt = Jet::variable(t);
    Jet x = prof.x(jt), r = prof.rho(jt);
    double speed = std::hypot(x.d1, r.d1);
    double nx = -r.d1 / speed, nr = x.d1 / speed;
    for (int side = 0; side < 2; ++side) {
      double sgn = side == 0 ? -1.0 : 1.0;
      auto holds = [&](double s) {
        Point3 q{x.v + sgn * s * nx, r.v + sgn * s * nr, 0.0};
        Point3 c = surface.project(q).point;
        double d = std::hypot(c[0] - x.v, c[1] - r.v, c[2]);
        return d <= 1e-6 * (1.0 + s);
      };
      double lo = 0.0, hi = w_b;
      if (holds(hi)) {
        lo = hi;
      } else {
        for (int it = 0; it < 40; ++it) {
          double mid = 0.5 * (lo + hi);
          if (holds(mid))
            lo = mid;
          else
            hi = mid;
        }
      }
      tab.ext[i][side] = lo;
    }
  });
  return tab;
}

}  // namespace

BandSet build_band(const Surface& surface, const BandSpec& spec) {
  spec.validate();
  const Box3& box = surface.bounding_box();
  for (int a = 0; a < 3; ++a)
    if (!(box.hi[a] >= box.lo[a]) || !std::isfinite(box.lo[a]) || !std::isfinite(box.hi[a]))
      fail(ErrorKind::InvalidInput, "surface bounding box is invalid");
  const double dx = spec.dx, w_b = spec.w_b;

  std::array<long, 3> lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    lo[a] = static_cast<long>(std::floor((box.lo[a] - w_b) / dx)) - 1;
    hi[a] = static_cast<long>(std::ceil((box.hi[a] + w_b) / dx)) + 1;
  }

  const std::size_t nslab = static_cast<std::size_t>(hi[0] - lo[0] + 1);
  std::vector<std::vector<std::array<long, 3>>> slab_cells(nslab);
  std::vector<std::vector<double>> slab_dist(nslab);
  parallel_for(nslab, [&](std::size_t s) {
    long i = lo[0] + static_cast<long>(s);
    for (long j = lo[1]; j <= hi[1]; ++j)
      for (long k = lo[2]; k <= hi[2]; ++k) {
        Point3 x{dx * i, dx * j, dx * k};
        if (box_distance(box, x) >= w_b) continue;
        SurfacePoint sp = surface.project(x);
        double d = std::abs(sp.signed_distance);
        if (d < w_b) {
          slab_cells[s].push_back({i, j, k});
          slab_dist[s].push_back(d);
        }
      }
  });

  BandSet band;
  band.spec = spec;
  for (std::size_t s = 0; s < nslab; ++s) {
    band.cells.insert(band.cells.end(), slab_cells[s].begin(), slab_cells[s].end());
    band.cell_distance.insert(band.cell_distance.end(), slab_dist[s].begin(), slab_dist[s].end());
  }
  if (band.cells.empty()) fail(ErrorKind::Config, "band is empty; widen w_b or refine dx");

  // Gauss-Chebyshev nodes on [-1, 1] with the weight function divided out,
  // rescaled so each axis sums to dx.
  const int p = spec.p;
  std::vector<double> node(p), wt(p);
  double wsum = 0.0;
  for (int i = 0; i < p; ++i) {
    double xi = std::cos((2.0 * (i + 1) - 1.0) * kPi / (2.0 * p));
    node[i] = 0.5 * dx * (1.0 + xi);
    wt[i] = (kPi / p) * std::sqrt(1.0 - xi * xi);
    wsum += wt[i];
  }
  for (double& w : wt) w *= dx / wsum;

  const std::size_t per_cell = static_cast<std::size_t>(p * p * p);
  const std::size_t nq = band.cells.size() * per_cell;
  band.quad_points.resize(nq);
  band.quad_weights.resize(nq);
  auto cloud = std::make_shared<CloudLayout>();
  cloud->positions.resize(nq);
  cloud->weights.resize(nq);

  ExtentTable extents;
  const bool tabulated = surface.kind() == Surface::Kind::Revolution;
  if (tabulated) extents = extent_table(surface, w_b, 1025);

  const std::size_t chunk = 256;
  const std::size_t nchunks = (band.cells.size() + chunk - 1) / chunk;
  parallel_for(nchunks, [&](std::size_t c) {
    std::size_t end = std::min(band.cells.size(), (c + 1) * chunk);
    for (std::size_t ci = c * chunk; ci < end; ++ci) {
      const auto& cell = band.cells[ci];
      std::size_t q = ci * per_cell;
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
          for (int e = 0; e < p; ++e, ++q) {
            Point3 x{dx * cell[0] + node[a], dx * cell[1] + node[b], dx * cell[2] + node[e]};
            double w = wt[a] * wt[b] * wt[e];
            band.quad_points[q] = x;
            band.quad_weights[q] = w;
            SurfacePoint sp = surface.project(x);
            cloud->positions[q] = sp.point;
            double jac = 1.0, thick = 2.0 * w_b;
            if (sp.has_curvature) {
              double s = sp.signed_distance;
              jac = std::max((1.0 + sp.k1 * s) * (1.0 + sp.k2 * s), 1e-3);
              thick = tabulated && std::isfinite(sp.param) ? extents(sp.param) : thickness(sp, w_b);
            }
            cloud->weights[q] = w / (jac * thick);
          }
    }
  });
  band.cloud = std::move(cloud);
  return band;
}

SurfaceDiffuser::SurfaceDiffuser(std::shared_ptr<const BandSet> band, double tau, double eps)
    : band_(std::move(band)), tau_(tau), eps_(eps) {
  if (!band_ || band_->n_q() == 0) fail(ErrorKind::InvalidInput, "surface diffusion needs a non-empty band");
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorKind::InvalidInput, "tau must be positive");
  if (!(eps > 0.0 && eps < 0.5)) fail(ErrorKind::OutOfRange, "eps must lie in (0, 0.5)");

  const auto& src = band_->quad_points;
  const auto& dst = band_->closest();
  Point3 lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::numeric_limits<double>::infinity();
    hi[a] = -lo[a];
  }
  for (const auto* set : {&src, &dst})
    for (const auto& x : *set)
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], x[a]);
        hi[a] = std::max(hi[a], x[a]);
      }
  Point3 center{};
  double half = 0.0;
  for (int a = 0; a < 3; ++a) {
    center[a] = 0.5 * (lo[a] + hi[a]);
    half = std::max(half, 0.5 * (hi[a] - lo[a]));
  }
  // Periodic images of the kernel must stay at least w_b apart after scaling.
  const double w_b = band_->spec.w_b;
  scale_ = std::min(1.0, 2.0 * kPi / (2.0 * half + w_b));
  const double tau_s = tau * scale_ * scale_;
  modes_ = spectral_grid(tau_s, eps, kPi);
  nufft_ = std::make_unique<Nufft>(modes_, std::clamp(eps, 1e-12, 1e-2));

  auto map = [&](const Point3& x) {
    Point3 y;
    for (int a = 0; a < 3; ++a) y[a] = std::min(scale_ * (x[a] - center[a]), std::nextafter(kPi, 0.0));
    return y;
  };
  sources_.resize(src.size());
  targets_.resize(dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) sources_[i] = map(src[i]);
  for (std::size_t i = 0; i < dst.size(); ++i) targets_[i] = map(dst[i]);

  const std::size_t mm = modes_.per_axis();
  const int M = modes_.m_half;
  const double h2t = modes_.h * modes_.h * tau_s;
  const double nq = static_cast<double>(src.size());
  multipliers_.assign(modes_.count(), 0.0);
  for (std::size_t i0 = 0; i0 < mm; ++i0)
    for (std::size_t i1 = 0; i1 < mm; ++i1)
      for (std::size_t i2 = 0; i2 < mm; ++i2) {
        // Modes at -M have no +M partner; dropping them keeps real data real.
        if (i0 == 0 || i1 == 0 || i2 == 0) continue;
        double m0 = static_cast<double>(i0) - M, m1 = static_cast<double>(i1) - M, m2 = static_cast<double>(i2) - M;
        multipliers_[(i0 * mm + i1) * mm + i2] = nq * std::exp(-(m0 * m0 + m1 * m1 + m2 * m2) * h2t);
      }
  const double kernel = scale_ * modes_.h / (2.0 * kPi);
  constant_ = kernel * kernel * kernel;

  // Single scalar making the constant field invariant on average.
  std::vector<double> ones(src.size(), 1.0), out(src.size());
  apply_scalar(ones.data(), out.data());
  const auto& w = band_->cloud->weights;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    num += w[i];
    den += w[i] * out[i];
  }
  calibration_ = num / den;
}

SurfaceDiffuser::~SurfaceDiffuser() = default;

void SurfaceDiffuser::apply_pair(const double* a, const double* b, double* out_a, double* out_b) const {
  const std::size_t n = sources_.size();
  const auto& qw = band_->quad_weights;
  std::vector<Complex> coeffs(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[i] = Complex(qw[i] * a[i], b ? qw[i] * b[i] : 0.0);
  std::vector<Complex> spec(modes_.count());
  nufft_->type1(sources_, coeffs, spec);
  for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= multipliers_[m];
  std::vector<Complex> vals(targets_.size());
  nufft_->type2(spec, targets_, vals);
  const double c = constant_ * calibration_;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    out_a[i] = c * vals[i].real();
    if (out_b) out_b[i] = c * vals[i].imag();
  }
}

void SurfaceDiffuser::apply_scalar(const double* a, double* out) const { apply_pair(a, nullptr, out, nullptr); }

MatrixField SurfaceDiffuser::apply(const MatrixField& f) const {
  if (f.is_grid()) fail(ErrorKind::Contract, "surface diffusion needs a cloud-backed field");
  if (f.size() != band_->n_q()) fail(ErrorKind::DimensionMismatch, "field does not match the band");
  MatrixField out = MatrixField::like(f);
  const int ne = f.components();
  for (int e = 0; e < ne; e += 2) {
    if (e + 1 < ne)
      apply_pair(f.component(e), f.component(e + 1), out.component(e), out.component(e + 1));
    else
      apply_scalar(f.component(e), out.component(e));
  }
  return out;
}

MatrixField diffuse_surface(std::shared_ptr<const BandSet> band, const MatrixField& f, double tau, double eps) {
  return SurfaceDiffuser(std::move(band), tau, eps).apply(f);
}

}  // namespace mbo
