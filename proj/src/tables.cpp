#include "mbo/tables.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mbo/cpm_surface.hpp"

namespace mbo {

double round_sig4(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return std::strtod(buf, nullptr);
}

std::vector<TableEntry> band_table() {
  std::vector<TableEntry> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      TableEntry e{1, kTableEps[i], kTableTaus[j], band_width(kTableTaus[j], kTableEps[i], TailModel::kLeadingTerm),
                   kReferenceBand[i][j], false};
      e.match = round_sig4(e.computed) == round_sig4(e.reference);
      out.push_back(e);
    }
  return out;
}

std::vector<TableEntry> mode_table() {
  std::vector<TableEntry> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      auto g = spectral_grid(kTableTaus[j], kTableEps[i], std::numbers::pi);
      TableEntry e{2, kTableEps[i], kTableTaus[j], static_cast<double>(g.m_half),
                   static_cast<double>(kReferenceModes[i][j]), false};
      e.match = e.computed == e.reference;
      out.push_back(e);
    }
  return out;
}

std::string format_tables(const std::vector<TableEntry>& band, const std::vector<TableEntry>& modes) {
  std::string s;
  char buf[160];
  auto header = [&](const char* title) {
    s += title;
    s += "\n  eps\\tau ";
    for (double t : kTableTaus) {
      std::snprintf(buf, sizeof buf, "%12.0e", t);
      s += buf;
    }
    s += "\n";
  };
  header("band width w_b");
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "  %7.0e ", kTableEps[i]);
    s += buf;
    for (int j = 0; j < 4; ++j) {
      const auto& e = band[i * 4 + j];
      std::snprintf(buf, sizeof buf, "%11.4g%s", e.computed, e.match ? " " : "*");
      s += buf;
    }
    s += "\n";
  }
  header("Fourier modes M");
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof buf, "  %7.0e ", kTableEps[i]);
    s += buf;
    for (int j = 0; j < 4; ++j) {
      const auto& e = modes[i * 4 + j];
      std::snprintf(buf, sizeof buf, "%11.0f%s", e.computed, e.match ? " " : "*");
      s += buf;
    }
    s += "\n";
  }
  return s;
}

}  // namespace mbo
