#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mbo/config.hpp"
#include "mbo/error.hpp"
#include "mbo/field.hpp"
#include "mbo/mbo.hpp"
#include "mbo/parallel.hpp"
#include "mbo/tables.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxIters = 2;
constexpr int kExitTableMismatch = 3;

std::string snapshot_name(long iter) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.mbof", iter);
  return buf;
}

int cmd_run(const std::string& config_path, const std::string& out_override, long snapshot_every) {
  mbo::RunConfig cfg = mbo::load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (snapshot_every >= 0) cfg.snapshot_every = snapshot_every;

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec || !fs::is_directory(cfg.out_dir)) mbo::fail(mbo::ErrorKind::Io, "cannot create output directory " + cfg.out_dir);
  const fs::path out(cfg.out_dir);

  mbo::PreparedRun prep = mbo::prepare_run(cfg);
  std::fprintf(stderr, "scenario %s: %zu points, n=%d, tau=%.6g\n", cfg.scenario.name.c_str(),
               prep.scenario.initial.size(), prep.scenario.initial.n(), prep.tau);

  auto hook = [&](long iter, const mbo::MatrixField& f) {
    if (cfg.snapshot_every > 0 && iter % cfg.snapshot_every == 0) mbo::write_snapshot((out / snapshot_name(iter)).string(), f);
  };
  mbo::RunResult res = mbo::mbo_run(prep.scenario.initial, prep.mbo, *prep.diffuser, hook);
  res.log.write_csv((out / "energy.csv").string());
  mbo::write_snapshot((out / "final.mbof").string(), res.final_field);

  const auto& last = res.log.back();
  bool constant = mbo::max_deviation_from_mean(res.final_field) <= 1e-6;
  std::printf("iterations=%ld energy=%.12g plus_volume=%.12g status=%s field=%s\n", res.iterations, last.energy,
              last.plus_volume, res.converged ? "converged" : "max_iters", constant ? "constant" : "non-constant");
  std::printf("max_norm=%.12g max_abs_det=%.12g singular=%zu\n", res.max_norm, res.max_abs_det, res.singular_total);
  return res.converged ? kExitOk : kExitMaxIters;
}

int cmd_tables() {
  auto band = mbo::band_table();
  auto modes = mbo::mode_table();
  std::cout << mbo::format_tables(band, modes);
  int bad = 0;
  for (const auto* table : {&band, &modes})
    for (const auto& e : *table)
      if (!e.match) {
        ++bad;
        std::printf("mismatch table %d eps=%g tau=%g computed=%.6g reference=%.6g\n", e.table, e.eps, e.tau, e.computed,
                    e.reference);
      }
  std::printf("%d of 32 entries differ\n", bad);
  return bad == 0 ? kExitOk : kExitTableMismatch;
}

int cmd_check(const std::string& path) {
  mbo::MatrixField f = mbo::read_snapshot(path);
  double defect = f.max_orthogonality_defect();
  if (defect > 1e-8) mbo::fail(mbo::ErrorKind::Format, "field is not orthogonal (defect " + std::to_string(defect) + ")");
  std::printf("points=%zu n=%d layout=%s\n", f.size(), f.n(), f.is_grid() ? "grid" : "cloud");
  std::printf("plus_volume=%.12g measure=%.12g\n", mbo::plus_volume(f), f.total_measure());
  if (f.is_grid() && f.grid().d == 2 && f.n() == 2) {
    try {
      auto w = mbo::winding_pair(f);
      std::printf("winding=(%ld,%ld)\n", w.ix, w.iy);
    } catch (const mbo::Error& e) {
      std::printf("winding=unresolved (%s)\n", e.what());
    }
  }
  if (f.is_grid()) {
    auto cells = mbo::interface_cells(f);
    std::printf("interface_cells=%zu\n", cells.size());
    if (f.grid().d == 2) {
      auto st = mbo::plus_region_stats(f);
      std::printf("plus_area=%.12g plus_perimeter=%.12g", st.area, st.perimeter);
      if (st.isoperimetric_ratio) std::printf(" isoperimetric_ratio=%.12g", *st.isoperimetric_ratio);
      std::printf("\n");
    }
  }
  std::printf("ok\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthogonal matrix field MBO solver"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default MBO_THREADS or hardware)")->check(CLI::Range(1, 1024));

  std::string config_path, out_dir;
  long snapshot_every = -1;
  auto* run = app.add_subcommand("run", "run a scenario from a config file");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides out.dir)");
  run->add_option("--snapshot-every", snapshot_every, "snapshot period, 0 disables")->check(CLI::NonNegativeNumber);

  app.add_subcommand("tables", "print the band-width and Fourier-mode tables");

  std::string snapshot_path;
  auto* check = app.add_subcommand("check", "validate a snapshot and print diagnostics");
  check->add_option("snapshot", snapshot_path, "MBOF file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (threads > 0) mbo::set_thread_count(threads);
    if (app.got_subcommand("run")) return cmd_run(config_path, out_dir, snapshot_every);
    if (app.got_subcommand("tables")) return cmd_tables();
    return cmd_check(snapshot_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
