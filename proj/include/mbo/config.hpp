#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "mbo/diffuser.hpp"
#include "mbo/mbo.hpp"
#include "mbo/scenarios.hpp"

namespace mbo {

struct RunConfig {
  ScenarioSpec scenario;
  std::optional<double> tau;
  double tau_dx = 8.0;
  long max_iters = 10000;
  double stop_tol = 1e-8;
  // Explicit target; volume scenarios otherwise keep their initial plus-volume.
  std::optional<double> volume_target;
  std::string out_dir = "out";
  long snapshot_every = 10;

  double effective_tau() const;
};

// Flat "key = value" lines; '#' starts a comment.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
const std::map<std::string, std::string>& config_keys();

struct PreparedRun {
  Scenario scenario;
  std::unique_ptr<Diffuser> diffuser;
  MboConfig mbo;
  double tau = 0.0;
};

PreparedRun prepare_run(const RunConfig& cfg);

}  // namespace mbo
