#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "stlplan/exporters.hpp"
#include "stlplan/mission_file.hpp"

namespace stlplan {

struct RunOptions {
  std::string mission_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> max_iterations;
  std::optional<double> temperature;  // constant schedule and report temperature
  std::optional<double> epsilon;
  bool plot = false;
  std::optional<std::string> validate_csv;  // re-check this trajectory instead of planning
};

// Loads the mission, plans, and writes trajectory.csv and report.json (plus
// trajectory.svg with plot) into out_dir. With validate_csv set, skips
// planning and re-checks the given trajectory against the mission. Returns
// the process exit code: 0 success, 1 usage or file errors, 2 the plan fell
// short.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace stlplan
