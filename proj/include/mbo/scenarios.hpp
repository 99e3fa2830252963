#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mbo/cpm_surface.hpp"
#include "mbo/field.hpp"
#include "mbo/surface.hpp"

namespace mbo {

struct ScenarioSpec {
  std::string name;
  std::size_t grid_size = 256;
  int m_index = 1;           // torus_winding
  double radius = 0.3;       // torus_disk_n1
  std::uint64_t seed = 1;    // torus_random_n1
  // Surface scenarios: the band is sized for this diffusion time.
  double tau = 0.0;
  double dx = 0.05;
  int p = 3;
  double eps = 1e-6;
  double band_width = 0.0;   // 0 selects band_width(tau, eps)
};

struct Scenario {
  MatrixField initial;
  std::optional<Surface> surface;
  std::shared_ptr<const BandSet> band;
  std::optional<double> volume_target;
};

const std::vector<std::string>& scenario_names();
bool is_surface_scenario(const std::string& name);
bool is_volume_scenario(const std::string& name);

// Default step time of a scenario; torus scenarios use 8 grid spacings.
double default_tau(const ScenarioSpec& spec);
ScenarioSpec default_spec(const std::string& name);

Scenario build_scenario(const ScenarioSpec& spec);
MatrixField build_initial(const ScenarioSpec& spec);

Surface builtin_surface(const std::string& name);

// The two printed 3x3 initial matrices, moved onto SO(3) and SO^-(3).
std::pair<SmallMatrix, SmallMatrix> patch_matrices();
std::pair<SmallMatrix, SmallMatrix> printed_patch_matrices();

}  // namespace mbo
