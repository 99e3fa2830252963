#include "mbo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mbo/error.hpp"

namespace mbo {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::string> kNames = {
    "torus_star_defect", "torus_parallel_defects", "torus_winding",   "torus_disk_n1",   "sphere_two_patches",
    "peanut_two_patches", "torus_volume_star",     "sphere_volume",   "torus_constant",  "torus_random_n1",
};

bool star_inside(double x, double y) {
  double r = std::hypot(x, y);
  double theta = std::atan2(y, x);
  return r < 0.3 + 0.06 * std::sin(6.0 * theta);
}

bool parallel_outside(double x, double y) {
  double bump = 0.25 * std::abs(std::sin(2.5 * kPi * y));
  return x > bump + 0.2 || x < -bump - 0.2;
}

template <class Inside, class Angle>
MatrixField o2_field(const GridSpec& g, Inside inside, Angle alpha) {
  MatrixField f = MatrixField::on_grid(g, 2);
  for (std::size_t i = 0; i < g.sizes[0]; ++i)
    for (std::size_t j = 0; j < g.sizes[1]; ++j) {
      double x = g.coord(0, i), y = g.coord(1, j);
      double a = alpha(x, y);
      f.set(i * g.sizes[1] + j, inside(x, y) ? SmallMatrix::rotation2(a) : SmallMatrix::reflection2(a));
    }
  return f;
}

MatrixField patches(const std::shared_ptr<const CloudLayout>& cloud, bool (*plus)(const Point3&)) {
  auto [m_plus, m_minus] = patch_matrices();
  MatrixField f = MatrixField::on_cloud(cloud, 3);
  for (std::size_t i = 0; i < f.size(); ++i) f.set(i, plus(cloud->positions[i]) ? m_plus : m_minus);
  return f;
}

bool sphere_octant(const Point3& x) { return x[0] < 0.0 && x[1] < 0.0 && x[2] > 0.0; }

bool peanut_cap(const Point3& p) {
  double y2 = p[1] * p[1], z2 = p[2] * p[2];
  return p[0] > std::sqrt((y2 + z2) * (y2 + 0.1) / 1.5);
}

}  // namespace

const std::vector<std::string>& scenario_names() { return kNames; }

bool is_surface_scenario(const std::string& name) {
  return name == "sphere_two_patches" || name == "peanut_two_patches" || name == "sphere_volume";
}

bool is_volume_scenario(const std::string& name) { return name == "torus_volume_star" || name == "sphere_volume"; }

std::pair<SmallMatrix, SmallMatrix> printed_patch_matrices() {
  SmallMatrix a(3, {0.392227, 0.706046, 0.046171, 0.655478, 0.031833, 0.097132, 0.171187, 0.276923, 0.82346});
  SmallMatrix b(3, {0.699077, 0.547216, 0.257508, 0.890903, 0.138624, 0.840717, 0.959291, 0.149294, 0.254282});
  return {a, b};
}

std::pair<SmallMatrix, SmallMatrix> patch_matrices() {
  auto [a, b] = printed_patch_matrices();
  return {t_plus(a), t_minus(b)};
}

Surface builtin_surface(const std::string& name) {
  if (name == "sphere") return Surface::sphere(1.0);
  if (name == "peanut") return Surface::revolution(peanut_profile());
  fail(ErrorKind::InvalidInput, "unknown surface '" + name + "'");
}

double default_tau(const ScenarioSpec& spec) {
  if (spec.name == "sphere_two_patches") return 0.005;
  if (spec.name == "peanut_two_patches") return 0.032;
  if (spec.name == "sphere_volume") return 0.01;
  return 8.0 / static_cast<double>(spec.grid_size);
}

ScenarioSpec default_spec(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  if (name == "peanut_two_patches") {
    s.dx = 0.04;
    s.p = 4;
  }
  s.tau = default_tau(s);
  return s;
}

Scenario build_scenario(const ScenarioSpec& spec) {
  if (std::find(kNames.begin(), kNames.end(), spec.name) == kNames.end())
    fail(ErrorKind::InvalidInput, "unknown scenario '" + spec.name + "'");
  Scenario sc;

  if (is_surface_scenario(spec.name)) {
    if (!(spec.tau > 0.0)) fail(ErrorKind::InvalidInput, "surface scenarios need tau > 0");
    sc.surface = builtin_surface(spec.name.rfind("peanut", 0) == 0 ? "peanut" : "sphere");
    BandSpec bs;
    bs.dx = spec.dx;
    bs.p = spec.p;
    bs.eps = spec.eps;
    bs.w_b = spec.band_width > 0.0 ? spec.band_width : band_width(spec.tau, spec.eps, TailModel::kFull);
    sc.band = std::make_shared<const BandSet>(build_band(*sc.surface, bs));
    sc.initial = patches(sc.band->cloud, spec.name == "peanut_two_patches" ? peanut_cap : sphere_octant);
    if (is_volume_scenario(spec.name)) sc.volume_target = plus_volume(sc.initial);
    return sc;
  }

  const GridSpec g = GridSpec::torus2(spec.grid_size);
  const std::string& n = spec.name;
  if (n == "torus_star_defect" || n == "torus_volume_star") {
    sc.initial = o2_field(g, star_inside, [](double x, double y) { return 0.5 * kPi * std::sin(2.0 * kPi * (x + y)); });
  } else if (n == "torus_parallel_defects") {
    sc.initial = o2_field(g, parallel_outside, [](double, double y) { return kPi * std::sin(2.0 * kPi * y); });
  } else if (n == "torus_winding") {
    double m = spec.m_index;
    sc.initial = o2_field(g, parallel_outside, [m](double, double y) { return 2.0 * kPi * m * y; });
  } else if (n == "torus_disk_n1") {
    if (!(spec.radius > 0.0 && spec.radius < 0.5)) fail(ErrorKind::InvalidInput, "disk radius must lie in (0, 0.5)");
    sc.initial = MatrixField::on_grid(g, 1);
    for (std::size_t i = 0; i < g.sizes[0]; ++i)
      for (std::size_t j = 0; j < g.sizes[1]; ++j)
        sc.initial.component(0)[i * g.sizes[1] + j] =
            std::hypot(g.coord(0, i), g.coord(1, j)) < spec.radius ? 1.0 : -1.0;
  } else if (n == "torus_constant") {
    sc.initial = MatrixField::on_grid(g, 2);
    sc.initial.fill(SmallMatrix::identity(2));
  } else if (n == "torus_random_n1") {
    sc.initial = MatrixField::on_grid(g, 1);
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = 0; i < sc.initial.size(); ++i) sc.initial.component(0)[i] = (rng() >> 63) ? 1.0 : -1.0;
  }
  if (is_volume_scenario(n)) sc.volume_target = plus_volume(sc.initial);
  return sc;
}

MatrixField build_initial(const ScenarioSpec& spec) { return build_scenario(spec).initial; }

}  // namespace mbo
