#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mbo/cpm_surface.hpp"
#include "mbo/error.hpp"
#include "mbo/matgeom.hpp"
#include "mbo/mbo.hpp"
#include "mbo/nufft.hpp"
#include "mbo/scenarios.hpp"
#include "mbo/tables.hpp"
#include "mbo/torus_heat.hpp"
#include "support.hpp"

using namespace mbo;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Worst maximum-principle diagnostics seen by any diffusion in this process.
struct MaxPrinciple {
  double worst_norm_excess = -1e300;
  double worst_det = 0.0;
  long runs = 0;

  void add(const RunResult& r, int n) {
    worst_norm_excess = std::max(worst_norm_excess, r.max_norm - std::sqrt(static_cast<double>(n)));
    worst_det = std::max(worst_det, r.max_abs_det);
    ++runs;
  }
  void add(const MatrixField& diffused) {
    const double root = std::sqrt(static_cast<double>(diffused.n()));
    for (std::size_t i = 0; i < diffused.size(); ++i) {
      SmallMatrix a = diffused.at(i);
      worst_norm_excess = std::max(worst_norm_excess, frobenius_norm(a) - root);
      worst_det = std::max(worst_det, std::abs(det(a)));
    }
    ++runs;
  }
} g_max_principle;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunResult run_tracked(const MatrixField& initial, const MboConfig& cfg, const Diffuser& d, const IterateHook& hook = {}) {
  RunResult r = mbo_run(initial, cfg, d, hook);
  g_max_principle.add(r, initial.n());
  return r;
}

bool energy_monotone(const RunResult& r, int n, double measure, double tau, double* worst_rise) {
  const double slack = 1e-9 * n * measure / tau;
  double rise = -1e300;
  const auto& rows = r.log.rows();
  for (std::size_t k = 1; k < rows.size(); ++k) rise = std::max(rise, rows[k].energy - rows[k - 1].energy);
  *worst_rise = rise;
  return rows.size() < 2 || rise <= slack;
}

// 1

Verdict table_one() {
  auto t0 = Clock::now();
  auto rows = band_table();
  int ok = 0;
  std::string bad;
  for (const auto& e : rows) {
    if (e.match)
      ++ok;
    else
      bad += fmt(" (eps=%g tau=%g: %.4g vs %.4g)", e.eps, e.tau, e.computed, e.reference);
  }
  double t = seconds_since(t0);
  return {ok == 16 && t < 1.0, fmt("%d/16 band widths match to 4 s.f.%s, %.3f s", ok, bad.c_str(), t)};
}

// 2

Verdict table_two() {
  auto t0 = Clock::now();
  auto rows = mode_table();
  int ok = 0;
  std::string bad;
  for (const auto& e : rows) {
    if (e.match)
      ++ok;
    else
      bad += fmt(" %g/%g", e.computed, e.reference);
  }
  double t = seconds_since(t0);
  return {ok == 16 && t < 1.0, fmt("%d/16 mode counts match exactly (computed/reference:%s), %.3f s", ok, bad.c_str(), t)};
}

// 3

Verdict projection_oracles() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  double worst_closed = 0.0, worst_brute = -1e300;
  long brute_checks = 0;
  for (int n : {2, 3}) {
    // One shared pool of Haar samples covering both components.
    std::vector<SmallMatrix> pool(100000);
    std::vector<char> positive(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
      pool[k] = test::random_orthogonal(rng, n);
      positive[k] = test::det_direct(pool[k]) > 0.0;
    }
    for (int trial = 0; trial < 1000; ++trial) {
      SmallMatrix a = test::gaussian_matrix(rng, n);
      if (std::abs(test::det_direct(a)) < 1e-8) {
        --trial;
        continue;
      }
      auto s = svd(a);
      double same = 0.0;
      for (int i = 0; i < n; ++i) same += (s.sigma[i] - 1.0) * (s.sigma[i] - 1.0);
      const double opposite = same + 4.0 * s.sigma[n - 1];
      auto q = nearest_orthogonal(a);
      auto c = nearest_opposite(a);
      worst_closed = std::max({worst_closed, std::abs(q.dist_sq - same), std::abs(test::dist2(a, q.q) - same),
                               std::abs(c.dist_sq - opposite), std::abs(test::dist2(a, c.q) - opposite)});
      const bool pos = test::det_direct(a) > 0.0;
      double best_any = 1e300, best_other = 1e300;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        double d = test::dist2(a, pool[k]);
        best_any = std::min(best_any, d);
        if (static_cast<bool>(positive[k]) != pos) best_other = std::min(best_other, d);
      }
      worst_brute = std::max({worst_brute, q.dist_sq - best_any, c.dist_sq - best_other});
      brute_checks += 2;
    }
  }
  const double gap = frobenius_dist(SmallMatrix::identity(3), SmallMatrix::diag({1.0, 1.0, -1.0}));
  const double gap_proj = std::sqrt(nearest_opposite(SmallMatrix::identity(3)).dist_sq);
  double t = seconds_since(t0);
  bool pass = worst_closed <= 1e-10 && worst_brute <= 1e-12 && gap == 2.0 && std::abs(gap_proj - 2.0) <= 1e-12 && t < 30.0;
  return {pass, fmt("closed-form error %.2e, projection minus best sample %.2e over %ld checks, gap %.17g "
                    "(projected %.17g), %.1f s",
                    worst_closed, worst_brute, brute_checks, gap, gap_proj, t)};
}

// 4

struct ScenarioRun {
  std::string name;
  ScenarioSpec spec;
  long max_iters;
};

Verdict lyapunov() {
  std::vector<ScenarioRun> runs;
  for (const auto& name : scenario_names()) {
    ScenarioSpec spec = default_spec(name);
    long cap = 2000;
    if (is_surface_scenario(name)) {
      // Coarsest band that still resolves the heat kernel, so each surface
      // run fits the desk budget.
      spec.dx = std::min(0.1, 0.7 * std::sqrt(default_tau(spec)));
      spec.p = 1;
      cap = 6;
    } else {
      spec.grid_size = 256;
    }
    spec.tau = default_tau(spec);
    runs.push_back({name, spec, cap});
  }
  bool all = true;
  std::string detail;
  std::vector<std::string> failed;
  for (const auto& r : runs) {
    auto t0 = Clock::now();
    Scenario sc = build_scenario(r.spec);
    std::unique_ptr<Diffuser> d;
    if (sc.band)
      d = std::make_unique<SurfaceDiffuser>(sc.band, r.spec.tau, r.spec.eps);
    else
      d = std::make_unique<TorusDiffuser>(sc.initial.grid(), r.spec.tau);
    MboConfig cfg;
    cfg.max_iters = r.max_iters;
    cfg.volume_target = sc.volume_target;
    RunResult res = run_tracked(sc.initial, cfg, *d);
    double rise = 0.0;
    bool mono = energy_monotone(res, sc.initial.n(), sc.initial.total_measure(), r.spec.tau, &rise);
    double t = seconds_since(t0);
    bool ok = mono && t < 120.0;
    all = all && ok;
    if (!ok) failed.push_back(r.name);
    if (cfg.volume_target) {
      double over = 0.0, wmax = 0.0;
      for (const auto& row : res.log.rows()) over = std::max(over, std::abs(row.plus_volume - *cfg.volume_target));
      for (std::size_t i = 0; i < sc.initial.size(); ++i) wmax = std::max(wmax, sc.initial.weight(i));
      std::printf("[INFO] 4  %s: worst |plus_volume - V| %.3e against largest point weight %.3e\n", r.name.c_str(), over,
                  wmax);
    }
    std::printf("       %-24s iters=%-5ld %s worst rise %+.3e, max |A|_F - sqrt(n) %+.2e, %.1f s\n", r.name.c_str(),
                res.iterations, ok ? "ok " : "BAD", rise, res.max_norm - std::sqrt(double(sc.initial.n())), t);
    std::fflush(stdout);
  }
  std::string names;
  for (const auto& f : failed) names += " " + f;
  detail = fmt("%zu/%zu scenario runs non-increasing within 1e-9*n*measure/tau%s%s", runs.size() - failed.size(),
               runs.size(), failed.empty() ? "" : "; rises in:", names.c_str());
  return {all, detail};
}

// 5

struct DiskRate {
  double mean_drop = 0.0;
  double expected = 0.0;
  double final_area = 0.0;
  long iterations = 0;
};

DiskRate disk_rate(double tau_dx) {
  ScenarioSpec spec = default_spec("torus_disk_n1");
  spec.grid_size = 256;
  spec.radius = 0.3;
  MatrixField f = build_initial(spec);
  TorusDiffuser d(f.grid(), tau_dx / 256.0);
  MboConfig cfg;
  cfg.max_iters = 2000;
  RunResult res = run_tracked(f, cfg, d);
  std::vector<double> area;
  for (const auto& row : res.log.rows()) area.push_back(row.plus_volume);
  // A run that stopped early stays put for the remaining steps.
  while (area.size() < 16) area.push_back(area.back());
  double drop = 0.0;
  for (int k = 3; k <= 15; ++k) drop += area[k - 1] - area[k];
  DiskRate r;
  r.mean_drop = drop / 13.0;
  r.expected = 2.0 * kPi * d.tau();
  r.final_area = res.log.back().plus_volume;
  r.iterations = res.iterations;
  return r;
}

Verdict curvature_limit() {
  auto t0 = Clock::now();
  DiskRate r = disk_rate(2.0);
  double rel = std::abs(r.mean_drop - r.expected) / r.expected;
  double t = seconds_since(t0);
  bool pass = rel <= 0.15 && r.final_area == 0.0 && t < 60.0;
  DiskRate fine = disk_rate(0.5);
  std::printf("[INFO] 5  same run at tau=dx/2: mean area drop %.5f vs 2*pi*tau %.5f (%.1f%%), vanished=%s after %ld steps\n",
              fine.mean_drop, fine.expected, 100.0 * std::abs(fine.mean_drop - fine.expected) / fine.expected,
              fine.final_area == 0.0 ? "yes" : "no", fine.iterations);
  return {pass, fmt("tau=2dx: mean area drop over steps 3-15 %.5f vs 2*pi*tau %.5f (%.1f%% off), vanished=%s after %ld "
                    "steps, %.1f s",
                    r.mean_drop, r.expected, 100.0 * rel, r.final_area == 0.0 ? "yes" : "no", r.iterations, t)};
}

// 6

Verdict star_defect() {
  auto t0 = Clock::now();
  ScenarioSpec spec = default_spec("torus_star_defect");
  spec.grid_size = 256;
  MatrixField f = build_initial(spec);
  TorusDiffuser d(f.grid(), 2.0 / 256.0);
  MboConfig cfg;
  cfg.max_iters = 5000;
  double best_ratio = 1e300;
  double first_ratio = 0.0;
  auto hook = [&](long iter, const MatrixField& field) {
    RegionStats st = plus_region_stats(field);
    if (st.area > 0.0 && st.isoperimetric_ratio) {
      if (iter == 0) first_ratio = *st.isoperimetric_ratio;
      best_ratio = std::min(best_ratio, *st.isoperimetric_ratio);
    }
  };
  RunResult res = run_tracked(f, cfg, d, hook);
  double dev = max_deviation_from_mean(res.final_field);
  double t = seconds_since(t0);
  bool pass = best_ratio < 1.15 && res.converged && dev <= 1e-6 && t < 120.0;
  return {pass, fmt("isoperimetric ratio %.4f -> min %.4f before extinction, final deviation %.2e after %ld steps, %.1f s",
                    first_ratio, best_ratio, dev, res.iterations, t)};
}

// 7

Verdict winding_one() {
  auto t0 = Clock::now();
  ScenarioSpec spec = default_spec("torus_winding");
  spec.grid_size = 256;
  spec.m_index = 1;
  MatrixField f = build_initial(spec);
  TorusDiffuser d(f.grid(), 0.5 / 256.0);
  MboConfig cfg;
  cfg.max_iters = 5000;
  RunResult res = run_tracked(f, cfg, d);
  auto [again, stats] = mbo_step(res.final_field, d);
  double change = max_pointwise_change(again, res.final_field);
  double dev = max_deviation_from_mean(res.final_field);
  std::string wind = "unresolved";
  bool wind_ok = false;
  try {
    WindingPair w = winding_pair(res.final_field);
    wind = fmt("(%ld,%ld)", w.ix, w.iy);
    wind_ok = w == WindingPair{0, 1};
  } catch (const Error&) {
  }
  double t = seconds_since(t0);
  bool pass = res.converged && change <= 1e-8 && dev > 1e-6 && wind_ok && t < 180.0;
  return {pass, fmt("converged=%s after %ld steps, extra step change %.2e, deviation from mean %.3f, winding %s, %.1f s",
                    res.converged ? "yes" : "no", res.iterations, change, dev, wind.c_str(), t)};
}

// 8

double max_rel_error(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

Verdict nufft_contract() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::normal_distribution<double> g;
  ModeGrid modes{1.0, 16};
  std::vector<Point3> pts(500);
  for (auto& x : pts) x = {u(rng), u(rng), u(rng)};
  std::vector<Complex> c(pts.size()), s(modes.count());
  for (auto& v : c) v = {g(rng), g(rng)};
  for (auto& v : s) v = {g(rng), g(rng)};

  Nufft plan(modes, 1e-6);
  std::vector<Complex> t1(modes.count()), t2(pts.size());
  plan.type1(pts, c, t1);
  plan.type2(s, pts, t2);
  double e1 = max_rel_error(t1, direct_type1(pts, c, modes));
  double e2 = max_rel_error(t2, direct_type2(s, pts, modes));

  Complex lhs = 0.0, rhs = 0.0;
  double n1 = 0.0, ns = 0.0;
  for (std::size_t m = 0; m < t1.size(); ++m) {
    lhs += t1[m] * std::conj(s[m]);
    n1 += std::norm(t1[m]);
    ns += std::norm(s[m]);
  }
  for (std::size_t j = 0; j < pts.size(); ++j) rhs += c[j] * std::conj(t2[j]);
  rhs /= static_cast<double>(pts.size());
  double adj = std::abs(lhs - rhs) / (std::sqrt(n1) * std::sqrt(ns));
  double t = seconds_since(t0);
  bool pass = e1 <= 1e-6 && e2 <= 1e-6 && adj <= 1e-6 && t < 10.0;
  return {pass, fmt("type-1 %.2e, type-2 %.2e, adjoint %.2e (relative to |t1||s|), %.2f s", e1, e2, adj, t)};
}

// 9

Verdict sphere_oracle() {
  auto t0 = Clock::now();
  const double tau = 0.01, eps = 1e-6;
  BandSpec bs;
  bs.dx = 0.05;
  bs.p = 1;
  bs.eps = eps;
  bs.w_b = band_width(tau, eps);
  auto band = std::make_shared<BandSet>(build_band(Surface::sphere(1.0), bs));
  SurfaceDiffuser d(band, tau, eps);
  const auto& cp = band->closest();
  const std::size_t n = band->n_q();
  std::vector<double> one(n, 1.0), z(n), o1(n), oz(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = cp[i][2];
  d.apply_pair(one.data(), z.data(), o1.data(), oz.data());

  const double decay = std::exp(-2.0 * tau);
  double const_dev = 0.0, zerr = 0.0, zmax = 0.0, num = 0.0, den = 0.0;
  const auto& w = band->cloud->weights;
  for (std::size_t i = 0; i < n; ++i) {
    const_dev = std::max(const_dev, std::abs(o1[i] - 1.0));
    zerr = std::max(zerr, std::abs(oz[i] - decay * z[i]));
    zmax = std::max(zmax, std::abs(z[i]));
    num += w[i] * oz[i] * z[i];
    den += w[i] * z[i] * z[i];
  }
  const double ratio = num / den;
  const double rel_ratio = std::abs(ratio - decay) / decay;
  const double rel_sup = zerr / (decay * zmax);

  auto [m1, m2] = patch_matrices();
  MatrixField f = MatrixField::on_cloud(band->cloud, 3);
  for (std::size_t i = 0; i < n; ++i) f.set(i, cp[i][0] < 0 && cp[i][1] < 0 && cp[i][2] > 0 ? m1 : m2);
  g_max_principle.add(d.apply(f));

  double t = seconds_since(t0);
  bool pass = const_dev <= 1e-5 && rel_ratio <= 0.01 && rel_sup <= 0.01 && t < 120.0;
  return {pass, fmt("%zu points, M=%d, constant deviation %.2e, z decay ratio %.6f vs e^{-2tau} %.6f (%.3f%%), "
                    "sup error %.3f%%, %.1f s",
                    n, d.modes().m_half, const_dev, ratio, decay, 100.0 * rel_ratio, 100.0 * rel_sup, t)};
}

// 10

Verdict max_principle() {
  const double norm_excess = g_max_principle.worst_norm_excess;
  const double dt = g_max_principle.worst_det;
  bool pass = g_max_principle.runs > 0 && norm_excess <= 1e-6 && dt <= 1 + 1e-6;
  return {pass, fmt("%ld diffusion sources, worst ||A||_F - sqrt(n) = %+.3e, worst |det| = %.12f", g_max_principle.runs,
                    norm_excess, dt)};
}

// 11

Verdict volume_constraint() {
  auto t0 = Clock::now();
  ScenarioSpec spec = default_spec("torus_volume_star");
  spec.grid_size = 256;
  spec.tau = default_tau(spec);
  Scenario sc = build_scenario(spec);
  TorusDiffuser d(sc.initial.grid(), spec.tau);
  MboConfig cfg;
  cfg.max_iters = 2000;
  cfg.volume_target = sc.volume_target;
  const double target = *sc.volume_target;
  RunResult res = run_tracked(sc.initial, cfg, d);
  const double cell = sc.initial.grid().cell_measure();
  double worst = 0.0;
  for (const auto& row : res.log.rows()) worst = std::max(worst, std::abs(row.plus_volume - target));

  std::mt19937_64 rng(71);
  auto cloud = std::make_shared<CloudLayout>();
  for (int i = 0; i < 6; ++i) cloud->positions.push_back({double(i), 0.0, 0.0});
  cloud->weights.assign(6, 1.0);
  double worst_gap = -1e300;
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 2 == 0 ? 2 : 3;
    MatrixField diffused = MatrixField::on_cloud(cloud, n);
    for (int i = 0; i < 6; ++i) diffused.set(i, 0.5 * test::gaussian_matrix(rng, n));
    for (int quota = 0; quota <= 6; ++quota) {
      auto [out, stats] = volume_project(diffused, quota);
      double chosen = 0.0;
      int pluses = 0;
      for (int i = 0; i < 6; ++i) {
        chosen -= frobenius_inner(out.at(i), diffused.at(i));
        if (test::det_direct(out.at(i)) > 0.0) ++pluses;
      }
      double best = 1e300;
      for (int mask = 0; mask < 64; ++mask) {
        if (__builtin_popcount(mask) != quota) continue;
        double e = 0.0;
        for (int i = 0; i < 6; ++i) {
          SmallMatrix a = diffused.at(i);
          e -= frobenius_inner((mask >> i) & 1 ? t_plus(a) : t_minus(a), a);
        }
        best = std::min(best, e);
      }
      worst_gap = std::max(worst_gap, pluses == quota ? chosen - best : 1e300);
      ++cases;
    }
  }
  double t = seconds_since(t0);
  bool pass = worst <= cell && worst_gap <= 1e-12 && t < 120.0;
  return {pass, fmt("%ld steps, worst |plus_volume - V| %.3e (cell %.3e), 6-point search %d cases worst excess %.2e, %.1f s",
                    res.iterations, worst, cell, worst_gap, cases, t)};
}

// 12

Verdict finite_convergence() {
  auto t0 = Clock::now();
  int reached = 0;
  long worst_iters = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScenarioSpec spec = default_spec("torus_random_n1");
    spec.grid_size = 32;
    spec.seed = seed;
    MatrixField f = build_initial(spec);
    TorusDiffuser d(f.grid(), 2.0 / 32.0);
    MboConfig cfg;
    cfg.max_iters = 500;
    cfg.stop_tol = 0.0;
    RunResult res = run_tracked(f, cfg, d);
    auto [again, stats] = mbo_step(res.final_field, d);
    if (res.converged && max_pointwise_change(again, res.final_field) == 0.0) ++reached;
    worst_iters = std::max(worst_iters, res.iterations);
  }
  double t = seconds_since(t0);
  return {reached == 20 && t < 30.0,
          fmt("%d/20 random inits at tau=2dx reached exact fixed points, slowest %ld steps, %.1f s", reached, worst_iters, t)};
}

// 13

Verdict so2_equivalence() {
  auto t0 = Clock::now();
  const std::size_t n = 128;
  GridSpec g = GridSpec::torus2(n);
  MatrixField f = MatrixField::on_grid(g, 2);
  for (std::size_t ix = 0; ix < n; ++ix)
    for (std::size_t iy = 0; iy < n; ++iy) {
      double x = g.coord(0, ix), y = g.coord(1, iy);
      f.set(ix * n + iy, SmallMatrix::rotation2(0.5 * kPi * std::sin(2 * kPi * (x + y)) + 2 * kPi * x));
    }
  TorusDiffuser d(g, 8.0 / n);
  auto [next, stats] = mbo_step(f, d);
  std::vector<double> re(f.component(0), f.component(0) + f.size());
  std::vector<double> im(f.component(2), f.component(2) + f.size());
  d.apply_plane(re.data());
  d.apply_plane(im.data());
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = std::hypot(re[i], im[i]);
    SmallMatrix expect = SmallMatrix::rotation2(std::atan2(im[i] / r, re[i] / r));
    worst = std::max(worst, std::sqrt(test::dist2(expect, next.at(i))));
  }
  double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 10.0, fmt("max Frobenius gap %.2e on 128^2, %.2f s", worst, t)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Verdict()>>> criteria = {
      {1, {"band-width table", table_one}},
      {2, {"Fourier-mode table", table_two}},
      {3, {"projection oracles", projection_oracles}},
      {4, {"Lyapunov monotonicity", lyapunov}},
      {5, {"mean-curvature limit (n=1 disk)", curvature_limit}},
      {6, {"star-defect O(2) run", star_defect}},
      {7, {"winding-1 run", winding_one}},
      {8, {"NUFFT contract", nufft_contract}},
      {9, {"sphere diffusion oracle", sphere_oracle}},
      {10, {"maximum principle", max_principle}},
      {11, {"volume constraint", volume_constraint}},
      {12, {"finite convergence n=1", finite_convergence}},
      {13, {"SO(2) equivalence", so2_equivalence}},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  if (chosen.empty())
    for (const auto& [k, v] : criteria) chosen.insert(k);

  int failed = 0, ran = 0;
  for (int k : chosen) {
    auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    Verdict v;
    try {
      v = it->second.second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    ++ran;
    if (!v.pass) ++failed;
    std::printf("[%s] %-2d %s: %s\n", v.pass ? "PASS" : "FAIL", k, it->second.first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
