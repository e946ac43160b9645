#pragma once

#include <optional>
#include <string>

#include "nls/nonlinearity.hpp"

namespace nls {

struct RunConfig {
  enum class Command { Solve, Scan, Find, MuStar, Verify };
  Command command = Command::Solve;

  std::string g_string;
  bool truncate_flag = false;
  int dim = 3;

  std::optional<double> mu;                       // solve
  std::optional<double> mu_min, mu_max;           // scan/find grid
  int steps = 32;
  std::optional<double> mass;
  int n_starts = 8;
  double tol = 1e-3;  // relative mass tolerance for find

  std::string out;    // output path prefix; empty writes to stdout
  bool plot = false;  // scan: also emit an SVG next to the CSV
  std::string suite;  // verify: criterion name filter

  NonlinearitySpec spec() const;  // parses g_string (+ truncation)
};

// Grammar: name[:k=v,...] with families
//   power:p=3
//   cubic-quintic:a=1,b=1
//   combined:+1*s^3,-1*s^5
// Throws UsageError on malformed input.
NonlinearitySpec parse_nonlinearity(const std::string& text);

// Throws UsageError on bad flags (the CLI maps it to exit code 2).
RunConfig parse_args(int argc, const char* const* argv);

// Executes a validated config; returns the process exit code.
int run(const RunConfig& config);

// parse + run with exit-code mapping: 0 success, 1 solver error, 2 usage.
int main_entry(int argc, const char* const* argv);

}  // namespace nls
