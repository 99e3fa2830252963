#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mbo/nufft.hpp"

namespace mbo {

// Value with first and second derivative, enough to differentiate profile curves.
struct Jet {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
  static Jet variable(double t) { return {t, 1.0, 0.0}; }
  static Jet constant(double c) { return {c, 0.0, 0.0}; }
};
Jet operator+(Jet a, Jet b);
Jet operator-(Jet a, Jet b);
Jet operator*(Jet a, Jet b);
Jet operator/(Jet a, Jet b);
Jet operator*(double s, Jet a);
Jet operator+(double s, Jet a);
Jet operator-(double s, Jet a);
Jet sqrt(Jet a);

// Meridian (x(t), rho(t)) rotated about the x axis; rho >= 0 and x' >= 0 on [t0, t1].
struct RevolutionProfile {
  std::string name;
  std::function<Jet(Jet)> x;
  std::function<Jet(Jet)> rho;
  double t0 = -1.0;
  double t1 = 1.0;
};

RevolutionProfile peanut_profile();

struct Box3 {
  Point3 lo{};
  Point3 hi{};
};

struct SurfacePoint {
  Point3 point{};
  // Positive outside. Unsigned for callable surfaces.
  double signed_distance = 0.0;
  // Principal curvatures, positive where the surface bends away from the outward normal (sphere: 1/R).
  double k1 = 0.0, k2 = 0.0;
  bool has_curvature = false;
  // Profile parameter of the closest point on revolution surfaces.
  double param = std::numeric_limits<double>::quiet_NaN();
};

class Surface {
 public:
  enum class Kind { Sphere, Revolution, Callable };

  static Surface sphere(double radius = 1.0);
  static Surface revolution(RevolutionProfile profile);
  static Surface callable(std::function<Point3(const Point3&)> closest, Box3 box);

  Kind kind() const { return kind_; }
  const Box3& bounding_box() const { return box_; }
  double radius() const { return radius_; }
  const RevolutionProfile& profile() const { return profile_; }

  SurfacePoint project(const Point3& x) const;
  Point3 closest_point(const Point3& x) const { return project(x).point; }
  // Exact for the sphere, quadrature for revolution surfaces; 0 when unknown.
  double area() const;

 private:
  Kind kind_ = Kind::Sphere;
  double radius_ = 1.0;
  RevolutionProfile profile_;
  // (x, rho) at the dense search samples
  std::shared_ptr<const std::vector<std::array<double, 2>>> samples_;
  std::function<Point3(const Point3&)> closest_;
  Box3 box_{};
};

inline Point3 closest_point(const Surface& s, const Point3& x) { return s.closest_point(x); }

}  // namespace mbo
