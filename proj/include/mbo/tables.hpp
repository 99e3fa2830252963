#pragma once

#include <array>
#include <string>
#include <vector>

namespace mbo {

inline constexpr std::array<double, 4> kTableTaus{1e-1, 1e-2, 1e-3, 1e-4};
inline constexpr std::array<double, 4> kTableEps{1e-3, 1e-6, 1e-9, 1e-12};

// Reference values, rows indexed by eps and columns by tau.
inline constexpr double kReferenceBand[4][4] = {
    {1.796, 0.5683, 0.1796, 0.05683},
    {2.474, 0.7823, 0.2474, 0.07823},
    {2.993, 0.9465, 0.2993, 0.09465},
    {3.432, 1.085, 0.3432, 0.1085},
};
inline constexpr long kReferenceModes[4][4] = {
    {8, 21, 55, 136},
    {11, 34, 100, 296},
    {14, 43, 130, 396},
    {17, 50, 154, 475},
};

struct TableEntry {
  int table = 1;
  double eps = 0.0;
  double tau = 0.0;
  double computed = 0.0;
  double reference = 0.0;
  bool match = false;
};

// Rounds to four significant digits.
double round_sig4(double x);

std::vector<TableEntry> band_table();
std::vector<TableEntry> mode_table();
std::string format_tables(const std::vector<TableEntry>& band, const std::vector<TableEntry>& modes);

}  // namespace mbo
