#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace steerlab {

/// Fully resolved run configuration: config-file values overlaid by flags.
struct RunConfig {
  std::string command;                  // verdict | sweep | table | certify
  std::string state;                    // verdict target descriptor
  std::string family;                   // sweep/table family
  std::vector<std::string> criteria;    // empty: family default set
  double from = 0.0, to = 0.0, step = 0.0;
  bool have_range = false;
  std::optional<int> grid_n;
  std::optional<double> box_halfwidth;
  std::string provenance;               // "", "analytic" or "quadrature"
  std::string out;                      // empty: stdout
  std::string format = "csv";           // csv | json
  std::string plot_dir;                 // sweep/table: emit <family>_<criterion>.dat
  std::uint64_t seed = 1;
  std::uint64_t samples = 10000;
  std::string domain = "both";          // certify: gaussian | qubit | both
};

/// Parses argv, runs the subcommand and returns the process exit code:
/// 0 success, 2 argument/validation failure (no output files written),
/// 3 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace steerlab
