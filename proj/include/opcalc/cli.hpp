#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

namespace opcalc::cli {

// exit codes
inline constexpr int kHolds = 0;
inline constexpr int kRefuted = 1;
inline constexpr int kInconclusive = 2;
inline constexpr int kInputError = 3;

struct RunConfig {
  std::string subcommand;
  std::string matrix_path, alpha_path, tau_path, series_path, vector_path, shift_path;
  std::string output_path;  // empty: standard output
  std::string csv_path;     // limits trace
  double tol = 1e-9;
  std::size_t N = 256;
  std::size_t horizon = 4096;
  std::size_t grid = 64;
  double radius = -1.0;  // model scan radius, default 1 - 1/grid
  bool strong = false;
  bool counterexample = false;
};

/// Runs one subcommand and writes a single JSON document to `out` (or to the
/// configured output file). Diagnostics go to `err` only.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line, including OPCALC_TOL / OPCALC_N / OPCALC_HORIZON /
/// OPCALC_GRID overrides for flags that were not given.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

std::string schema_dump();

}  // namespace opcalc::cli
