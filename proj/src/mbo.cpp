#include "mbo/mbo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mbo/error.hpp"
#include "mbo/parallel.hpp"
#include "mbo/simd/kernels.hpp"

namespace mbo {
namespace {

constexpr std::size_t kChunk = 4096;

template <class Fn>
void for_chunks(std::size_t count, Fn&& fn) {
  std::size_t chunks = (count + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    std::size_t lo = c * kChunk, hi = std::min(count, lo + kChunk);
    fn(lo, hi, c);
  });
}

void require_orthogonal(const MatrixField& f) {
  if (!f.is_orthogonal(1e-8)) fail(ErrorKind::Contract, "MBO iterate is not orthogonal-valued");
}

struct ChunkStats {
  std::size_t singular = 0;
  double max_norm = 0.0;
  double max_abs_det = 0.0;
};

StepStats reduce(const std::vector<ChunkStats>& parts) {
  StepStats s;
  for (const auto& p : parts) {
    s.singular += p.singular;
    s.max_norm = std::max(s.max_norm, p.max_norm);
    s.max_abs_det = std::max(s.max_abs_det, p.max_abs_det);
  }
  return s;
}

}  // namespace

double lyapunov_energy(const MatrixField& f, const MatrixField& diffused, double tau) {
  if (!(tau > 0.0)) fail(ErrorKind::InvalidInput, "tau must be positive");
  if (!f.same_layout(diffused)) fail(ErrorKind::DimensionMismatch, "diffused field layout differs");
  require_orthogonal(f);
  const auto& k = simd::active();
  double inner = 0.0;
  for (int e = 0; e < f.components(); ++e) {
    if (f.is_grid())
      inner += f.grid().cell_measure() * k.dot(f.component(e), diffused.component(e), f.size());
    else
      inner += k.wdot(f.cloud().weights.data(), f.component(e), diffused.component(e), f.size());
  }
  return (static_cast<double>(f.n()) * f.total_measure() - inner) / tau;
}

double lyapunov_energy(const MatrixField& f, const Diffuser& diffuser) {
  return lyapunov_energy(f, diffuser.apply(f), diffuser.tau());
}

std::pair<MatrixField, StepStats> project(const MatrixField& diffused) {
  MatrixField out = MatrixField::like(diffused);
  std::vector<ChunkStats> parts((diffused.size() + kChunk - 1) / kChunk);
  for_chunks(diffused.size(), [&](std::size_t lo, std::size_t hi, std::size_t c) {
    ChunkStats& st = parts[c];
    for (std::size_t i = lo; i < hi; ++i) {
      SmallMatrix a = diffused.at(i);
      double d = det(a);
      st.max_norm = std::max(st.max_norm, frobenius_norm(a));
      st.max_abs_det = std::max(st.max_abs_det, std::abs(d));
      if (d == 0.0) {
        ++st.singular;
        out.set(i, plus_minus(a).plus);
      } else {
        out.set(i, nearest_orthogonal(a).q);
      }
    }
  });
  return {std::move(out), reduce(parts)};
}

std::pair<MatrixField, StepStats> mbo_step(const MatrixField& f, const Diffuser& diffuser) {
  require_orthogonal(f);
  auto [next, stats] = project(diffuser.apply(f));
  stats.max_change = max_pointwise_change(next, f);
  stats.sign_flips = sign_flips(next, f);
  return {std::move(next), stats};
}

std::vector<double> delta_e(const MatrixField& diffused) {
  std::vector<double> out(diffused.size());
  for_chunks(diffused.size(), [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t i = lo; i < hi; ++i) {
      SmallMatrix a = diffused.at(i);
      PlusMinus pm = plus_minus(a);
      out[i] = frobenius_inner(pm.plus - pm.minus, a);
    }
  });
  return out;
}

ThresholdResult select_threshold(std::span<const double> values, std::span<const double> weights, double volume) {
  if (values.size() != weights.size()) fail(ErrorKind::DimensionMismatch, "values and weights differ in length");
  double total = 0.0;
  for (double w : weights) total += w;
  // Rounding guard so a target computed as a sum of weights is met exactly.
  const double slack = 1e-12 * std::max(total, 1.0);
  if (!(volume >= -slack) || !(volume <= total + slack)) fail(ErrorKind::OutOfRange, "volume target outside [0, total weight]");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  ThresholdResult r;
  if (values.empty()) return r;
  if (volume <= slack) {
    r.lambda = values[order.front()] + 1.0;
    return r;
  }
  double acc = 0.0;
  std::size_t k = 0;
  while (k < order.size() && acc < volume - slack) acc += weights[order[k++]];
  r.plus_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  if (k == order.size())
    r.lambda = values[order.back()] - 1.0;
  else
    r.lambda = 0.5 * (values[order[k - 1]] + values[order[k]]);
  return r;
}

std::pair<MatrixField, StepStats> volume_project(const MatrixField& diffused, double volume) {
  const std::size_t n = diffused.size();
  std::vector<PlusMinus> pm(n);
  std::vector<double> de(n);
  std::vector<ChunkStats> parts((n + kChunk - 1) / kChunk);
  for_chunks(n, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    ChunkStats& st = parts[c];
    for (std::size_t i = lo; i < hi; ++i) {
      SmallMatrix a = diffused.at(i);
      double d = det(a);
      st.max_norm = std::max(st.max_norm, frobenius_norm(a));
      st.max_abs_det = std::max(st.max_abs_det, std::abs(d));
      if (d == 0.0) ++st.singular;
      pm[i] = plus_minus(a);
      de[i] = frobenius_inner(pm[i].plus - pm[i].minus, a);
    }
  });
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = diffused.weight(i);
  ThresholdResult thr = select_threshold(de, w, volume);
  std::vector<char> plus(n, 0);
  for (std::size_t i : thr.plus_indices) plus[i] = 1;
  MatrixField out = MatrixField::like(diffused);
  for (std::size_t i = 0; i < n; ++i) out.set(i, plus[i] ? pm[i].plus : pm[i].minus);
  return {std::move(out), reduce(parts)};
}

std::pair<MatrixField, StepStats> volume_mbo_step(const MatrixField& f, const Diffuser& diffuser, double volume) {
  require_orthogonal(f);
  auto [next, stats] = volume_project(diffuser.apply(f), volume);
  stats.max_change = max_pointwise_change(next, f);
  stats.sign_flips = sign_flips(next, f);
  return {std::move(next), stats};
}

RunResult mbo_run(const MatrixField& initial, const MboConfig& cfg, const Diffuser& diffuser, const IterateHook& hook) {
  if (cfg.max_iters < 0) fail(ErrorKind::InvalidInput, "max_iters must be non-negative");
  if (!(cfg.stop_tol >= 0.0)) fail(ErrorKind::InvalidInput, "stop_tol must be non-negative");
  require_orthogonal(initial);
  if (cfg.volume_target) {
    double total = initial.total_measure();
    if (!(*cfg.volume_target >= 0.0) || *cfg.volume_target > total * (1.0 + 1e-12))
      fail(ErrorKind::OutOfRange, "volume target outside [0, total measure]");
  }

  RunResult r;
  MatrixField cur = initial;
  MatrixField diffused = diffuser.apply(cur);
  r.log.push({0, lyapunov_energy(cur, diffused, diffuser.tau()), plus_volume(cur), 0.0, 0});
  if (hook) hook(0, cur);

  for (long s = 1; s <= cfg.max_iters; ++s) {
    auto [next, stats] = cfg.volume_target ? volume_project(diffused, *cfg.volume_target) : project(diffused);
    stats.max_change = max_pointwise_change(next, cur);
    stats.sign_flips = sign_flips(next, cur);
    r.singular_total += stats.singular;
    r.max_norm = std::max(r.max_norm, stats.max_norm);
    r.max_abs_det = std::max(r.max_abs_det, stats.max_abs_det);
    if (stats.sign_flips > 0) ++r.flip_iterations;

    cur = std::move(next);
    diffused = diffuser.apply(cur);
    r.log.push({s, lyapunov_energy(cur, diffused, diffuser.tau()), plus_volume(cur), stats.max_change, stats.sign_flips});
    r.iterations = s;
    if (hook) hook(s, cur);
    if (stats.max_change <= cfg.stop_tol) {
      r.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < diffused.size(); ++i) {
    SmallMatrix a = diffused.at(i);
    r.max_norm = std::max(r.max_norm, frobenius_norm(a));
    r.max_abs_det = std::max(r.max_abs_det, std::abs(det(a)));
  }
  r.final_field = std::move(cur);
  return r;
}

}  // namespace mbo
