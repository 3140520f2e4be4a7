#pragma once

// Command-line front end. Exit codes: 0 success, 2 invalid input,
// 3 numerical failure, 4 acceptance threshold exceeded.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace yule::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitThreshold = 4;

/// Environment variable holding the default Monte Carlo seed.
inline constexpr const char* kSeedEnv = "YULE_SEED";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool operator==(const Table&) const = default;
};

/// 17 significant digits, so parsing the text gives back the same double.
std::string format_number(double x);
/// Header row plus one line per row, ',' separated, '\n' terminated.
std::string format_csv(const Table& table);
Table parse_csv(const std::string& text);

struct FigureOptions {
  std::vector<double> nus;  // empty: the figure's own values
  double t = -1.0;          // < 0: figure default
  double lambda = 1.0;
  std::uint64_t kmax = 0;   // 0: figure default
  std::uint64_t k = 20;     // figure 4, lower panel
  int points = 0;           // 0: figure default
  double tmax = 20.0;       // figure 4 time range
};

/// Curve data for figures 1, 2, 4 and 5: first column x, k or t, then one
/// column per nu (figures 1 and 4 have two panels, so two column groups).
Table figure_table(int figure, const FigureOptions& options = {});

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace yule::cli
