#include "mbo/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mbo/error.hpp"

namespace mbo {

namespace {
constexpr int kSearchSamples = 1024;
}

Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2}; }
Jet operator/(Jet a, Jet b) {
  double inv = 1.0 / b.v;
  Jet r{inv, -b.d1 * inv * inv, (2.0 * b.d1 * b.d1 - b.v * b.d2) * inv * inv * inv};
  return a * r;
}
Jet operator*(double s, Jet a) { return {s * a.v, s * a.d1, s * a.d2}; }
Jet operator+(double s, Jet a) { return {s + a.v, a.d1, a.d2}; }
Jet operator-(double s, Jet a) { return {s - a.v, -a.d1, -a.d2}; }
Jet sqrt(Jet a) {
  double s = std::sqrt(a.v);
  return {s, a.d1 / (2.0 * s), a.d2 / (2.0 * s) - a.d1 * a.d1 / (4.0 * s * s * s)};
}

RevolutionProfile peanut_profile() {
  RevolutionProfile p;
  p.name = "peanut";
  p.x = [](Jet t) { return 3.0 * t - t * t * t; };
  // 4 - x^2 = (1 - t^2)^2 (4 - t^2), which keeps rho smooth at the tips.
  p.rho = [](Jet t) {
    Jet x = 3.0 * t - t * t * t;
    return 0.5 * (sqrt(1.0 + x * x) * (1.0 - t * t) * sqrt(4.0 - t * t));
  };
  p.t0 = -1.0;
  p.t1 = 1.0;
  return p;
}

Surface Surface::sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::InvalidInput, "sphere radius must be positive");
  Surface s;
  s.kind_ = Kind::Sphere;
  s.radius_ = radius;
  s.box_ = {{-radius, -radius, -radius}, {radius, radius, radius}};
  return s;
}

Surface Surface::revolution(RevolutionProfile profile) {
  if (!profile.x || !profile.rho || !(profile.t1 > profile.t0))
    fail(ErrorKind::InvalidInput, "revolution profile is incomplete");
  Surface s;
  s.kind_ = Kind::Revolution;
  s.profile_ = std::move(profile);
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, rmax = 0.0;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    double t = s.profile_.t0 + (s.profile_.t1 - s.profile_.t0) * i / samples;
    double x = s.profile_.x(Jet::constant(t)).v;
    double r = s.profile_.rho(Jet::constant(t)).v;
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    rmax = std::max(rmax, r);
  }
  auto dense = std::make_shared<std::vector<std::array<double, 2>>>(kSearchSamples);
  for (int i = 0; i < kSearchSamples; ++i) {
    double t = s.profile_.t0 + (s.profile_.t1 - s.profile_.t0) * i / (kSearchSamples - 1);
    (*dense)[i] = {s.profile_.x(Jet::constant(t)).v, s.profile_.rho(Jet::constant(t)).v};
  }
  s.samples_ = std::move(dense);
  // Dense sampling can miss the true radius maximum by a hair.
  rmax *= 1.0 + 1e-6;
  s.box_ = {{xlo, -rmax, -rmax}, {xhi, rmax, rmax}};
  return s;
}

Surface Surface::callable(std::function<Point3(const Point3&)> closest, Box3 box) {
  if (!closest) fail(ErrorKind::InvalidInput, "closest-point map is empty");
  Surface s;
  s.kind_ = Kind::Callable;
  s.closest_ = std::move(closest);
  s.box_ = box;
  return s;
}

namespace {

SurfacePoint project_sphere(double radius, const Point3& x) {
  SurfacePoint sp;
  double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (r == 0.0)
    sp.point = {radius, 0.0, 0.0};
  else
    sp.point = {x[0] * radius / r, x[1] * radius / r, x[2] * radius / r};
  sp.signed_distance = r - radius;
  sp.k1 = sp.k2 = 1.0 / radius;
  sp.has_curvature = true;
  return sp;
}

struct ProfileEval {
  Jet x, rho;
};

SurfacePoint project_revolution(const RevolutionProfile& p, const std::vector<std::array<double, 2>>& dense,
                                const Point3& q) {
  const double px = q[0];
  const double r = std::hypot(q[1], q[2]);
  auto eval = [&](double t) { return ProfileEval{p.x(Jet::variable(t)), p.rho(Jet::variable(t))}; };
  auto dist2 = [&](double t) {
    double dx = p.x(Jet::constant(t)).v - px;
    double dr = p.rho(Jet::constant(t)).v - r;
    return dx * dx + dr * dr;
  };

  const int samples = kSearchSamples;
  const double span = p.t1 - p.t0;
  int best = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double dx = dense[i][0] - px, dr = dense[i][1] - r;
    double f = dx * dx + dr * dr;
    if (f < best_f) {
      best_f = f;
      best = i;
    }
  }
  double lo = p.t0 + span * std::max(best - 1, 0) / (samples - 1);
  double hi = p.t0 + span * std::min(best + 1, samples - 1) / (samples - 1);

  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = dist2(c), fd = dist2(d);
  while (b - a > 1e-12) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = dist2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = dist2(d);
    }
  }
  double t = 0.5 * (a + b);
  double ft = dist2(t);
  for (double end : {lo, hi}) {
    double fe = dist2(end);
    if (fe < ft) {
      t = end;
      ft = fe;
    }
  }

  // Newton polish on the stationarity condition.
  for (int it = 0; it < 8; ++it) {
    ProfileEval e = eval(t);
    double ex = e.x.v - px, er = e.rho.v - r;
    double f1 = ex * e.x.d1 + er * e.rho.d1;
    double f2 = e.x.d1 * e.x.d1 + ex * e.x.d2 + e.rho.d1 * e.rho.d1 + er * e.rho.d2;
    if (!(f2 > 0.0)) break;
    double tn = t - f1 / f2;
    if (!(tn >= lo && tn <= hi)) break;
    double fn = dist2(tn);
    if (fn > ft) break;
    bool done = tn == t;
    t = tn;
    ft = fn;
    if (done) break;
  }

  ProfileEval e = eval(t);
  double cy = 1.0, cz = 0.0;
  if (r > 0.0) {
    cy = q[1] / r;
    cz = q[2] / r;
  }
  SurfacePoint sp;
  sp.point = {e.x.v, e.rho.v * cy, e.rho.v * cz};
  double speed = std::hypot(e.x.d1, e.rho.d1);
  double nx = -e.rho.d1 / speed, nr = e.x.d1 / speed;
  sp.signed_distance = (px - e.x.v) * nx + (r - e.rho.v) * nr;
  double km = (e.x.d2 * e.rho.d1 - e.x.d1 * e.rho.d2) / (speed * speed * speed);
  double kp = e.rho.v > 1e-9 ? e.x.d1 / (e.rho.v * speed) : km;
  sp.k1 = km;
  sp.k2 = kp;
  sp.has_curvature = true;
  sp.param = t;
  return sp;
}

}  // namespace

SurfacePoint Surface::project(const Point3& x) const {
  for (double c : x)
    if (!std::isfinite(c)) fail(ErrorKind::InvalidInput, "closest point of a non-finite point");
  switch (kind_) {
    case Kind::Sphere:
      return project_sphere(radius_, x);
    case Kind::Revolution:
      return project_revolution(profile_, *samples_, x);
    case Kind::Callable: {
      SurfacePoint sp;
      sp.point = closest_(x);
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += (x[a] - sp.point[a]) * (x[a] - sp.point[a]);
      sp.signed_distance = std::sqrt(s);
      return sp;
    }
  }
  return {};
}

double Surface::area() const {
  switch (kind_) {
    case Kind::Sphere:
      return 4.0 * std::numbers::pi * radius_ * radius_;
    case Kind::Revolution: {
      // Composite Simpson on 2 pi rho |c'|.
      const int n = 20000;
      const double hstep = (profile_.t1 - profile_.t0) / n;
      double s = 0.0;
      for (int i = 0; i <= n; ++i) {
        double t = profile_.t0 + i * hstep;
        Jet x = profile_.x(Jet::variable(t)), r = profile_.rho(Jet::variable(t));
        double f = r.v * std::hypot(x.d1, r.d1);
        s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
      }
      return 2.0 * std::numbers::pi * s * hstep / 3.0;
    }
    case Kind::Callable:
      return 0.0;
  }
  return 0.0;
}

}  // namespace mbo
