#include "mbo/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mbo/cpm_surface.hpp"
#include "mbo/error.hpp"
#include "mbo/torus_heat.hpp"

namespace mbo {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
    fail(ErrorKind::Config, key + ": expected a number, got '" + v + "'");
  return d;
}

long to_long(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  long l = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) fail(ErrorKind::Config, key + ": expected an integer, got '" + v + "'");
  return l;
}

}  // namespace

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys = {
      {"scenario.name", "scenario identifier (required)"},
      {"scenario.m_index", "winding index of torus_winding (default 1)"},
      {"scenario.radius", "disk radius of torus_disk_n1 (default 0.3)"},
      {"scenario.seed", "seed of torus_random_n1 (default 1)"},
      {"grid.size", "torus points per axis (default 256)"},
      {"run.tau", "step time; overrides run.tau_dx"},
      {"run.tau_dx", "torus step time in grid spacings (default 8)"},
      {"run.max_iters", "iteration cap (default 10000)"},
      {"run.stop_tol", "max pointwise change that counts as converged (default 1e-8)"},
      {"run.volume_target", "plus-volume to hold, or 'initial'"},
      {"run.snapshot_every", "snapshot period in iterations, 0 disables (default 10)"},
      {"surface.dx", "band grid spacing (default 0.05; peanut 0.04)"},
      {"surface.p", "quadrature nodes per axis and cell (default 3; peanut 4)"},
      {"surface.eps", "accuracy target (default 1e-6)"},
      {"surface.band_width", "band width; default from the truncation bound"},
      {"out.dir", "output directory (default out)"},
  };
  return keys;
}

double RunConfig::effective_tau() const {
  if (tau) return *tau;
  if (is_surface_scenario(scenario.name)) return default_tau(scenario);
  return tau_dx / static_cast<double>(scenario.grid_size);
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!config_keys().count(key)) fail(ErrorKind::Config, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (kv.count(key)) fail(ErrorKind::Config, "duplicate key '" + key + "'");
    kv[key] = value;
  }
  if (!kv.count("scenario.name")) fail(ErrorKind::Config, "scenario.name is required");

  const std::string name = kv["scenario.name"];
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    fail(ErrorKind::Config, "unknown scenario '" + name + "'");

  RunConfig c;
  c.scenario = default_spec(name);
  for (const auto& [key, v] : kv) {
    if (key == "scenario.m_index") c.scenario.m_index = static_cast<int>(to_long(key, v));
    else if (key == "scenario.radius") c.scenario.radius = to_double(key, v);
    else if (key == "scenario.seed") c.scenario.seed = static_cast<std::uint64_t>(to_long(key, v));
    else if (key == "grid.size") {
      long n = to_long(key, v);
      if (n < 8 || n > 8192) fail(ErrorKind::Config, "grid.size must lie in [8, 8192]");
      c.scenario.grid_size = static_cast<std::size_t>(n);
    } else if (key == "run.tau") c.tau = to_double(key, v);
    else if (key == "run.tau_dx") c.tau_dx = to_double(key, v);
    else if (key == "run.max_iters") c.max_iters = to_long(key, v);
    else if (key == "run.stop_tol") c.stop_tol = to_double(key, v);
    else if (key == "run.volume_target") {
      if (v != "initial") {
        c.volume_target = to_double(key, v);
        if (*c.volume_target < 0.0) fail(ErrorKind::Config, "run.volume_target must be non-negative");
      }
      else if (!is_volume_scenario(name)) c.volume_target = -1.0;  // resolved against the initial field
    } else if (key == "run.snapshot_every") c.snapshot_every = to_long(key, v);
    else if (key == "surface.dx") c.scenario.dx = to_double(key, v);
    else if (key == "surface.p") c.scenario.p = static_cast<int>(to_long(key, v));
    else if (key == "surface.eps") c.scenario.eps = to_double(key, v);
    else if (key == "surface.band_width") c.scenario.band_width = to_double(key, v);
    else if (key == "out.dir") c.out_dir = v;
  }

  double tau = c.effective_tau();
  if (!(tau > 0.0)) fail(ErrorKind::Config, "step time must be positive");
  if (c.max_iters < 0) fail(ErrorKind::Config, "run.max_iters must be non-negative");
  if (!(c.stop_tol >= 0.0)) fail(ErrorKind::Config, "run.stop_tol must be non-negative");
  if (c.snapshot_every < 0) fail(ErrorKind::Config, "run.snapshot_every must be non-negative");
  if (c.out_dir.empty()) fail(ErrorKind::Config, "out.dir must not be empty");
  c.scenario.tau = tau;
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

PreparedRun prepare_run(const RunConfig& cfg) {
  PreparedRun r;
  r.tau = cfg.effective_tau();
  ScenarioSpec spec = cfg.scenario;
  spec.tau = r.tau;
  try {
    r.scenario = build_scenario(spec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    fail(ErrorKind::Config, e.what());
  }
  if (r.scenario.band)
    r.diffuser = std::make_unique<SurfaceDiffuser>(r.scenario.band, r.tau, spec.eps);
  else
    r.diffuser = std::make_unique<TorusDiffuser>(r.scenario.initial.grid(), r.tau);
  r.mbo.max_iters = cfg.max_iters;
  r.mbo.stop_tol = cfg.stop_tol;
  r.mbo.volume_target = r.scenario.volume_target;
  if (cfg.volume_target) {
    double v = *cfg.volume_target < 0.0 ? plus_volume(r.scenario.initial) : *cfg.volume_target;
    if (v > r.scenario.initial.total_measure()) fail(ErrorKind::Config, "run.volume_target exceeds the domain measure");
    r.mbo.volume_target = v;
  }
  return r;
}

}  // namespace mbo
