#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mbo/diffuser.hpp"
#include "mbo/field.hpp"

namespace mbo {

struct MboConfig {
  long max_iters = 10000;
  double stop_tol = 1e-8;
  std::optional<double> volume_target;
};

struct StepStats {
  double max_change = 0.0;
  std::size_t sign_flips = 0;
  std::size_t singular = 0;
  // Maximum-principle diagnostics of the diffused field.
  double max_norm = 0.0;
  double max_abs_det = 0.0;
};

struct ThresholdResult {
  double lambda = 0.0;
  std::vector<std::size_t> plus_indices;
};

// (1/tau) sum_i w_i (n - <A_i, (e^{tau Delta} A)_i>)
double lyapunov_energy(const MatrixField& f, const Diffuser& diffuser);
double lyapunov_energy(const MatrixField& f, const MatrixField& diffused, double tau);

// Pointwise nearest orthogonal matrix of an already diffused field.
std::pair<MatrixField, StepStats> project(const MatrixField& diffused);
std::pair<MatrixField, StepStats> mbo_step(const MatrixField& f, const Diffuser& diffuser);

std::vector<double> delta_e(const MatrixField& diffused);
ThresholdResult select_threshold(std::span<const double> values, std::span<const double> weights, double volume);
std::pair<MatrixField, StepStats> volume_project(const MatrixField& diffused, double volume);
std::pair<MatrixField, StepStats> volume_mbo_step(const MatrixField& f, const Diffuser& diffuser, double volume);

struct RunResult {
  MatrixField final_field;
  EnergyLog log;
  bool converged = false;
  long iterations = 0;
  std::size_t singular_total = 0;
  long flip_iterations = 0;
  double max_norm = 0.0;
  double max_abs_det = 0.0;
};

using IterateHook = std::function<void(long iter, const MatrixField& field)>;

// Stops once an iteration changes the field by at most stop_tol, or after
// max_iters steps. The log has one row per iterate, starting at the initial field.
RunResult mbo_run(const MatrixField& initial, const MboConfig& cfg, const Diffuser& diffuser,
                  const IterateHook& hook = {});

}  // namespace mbo
