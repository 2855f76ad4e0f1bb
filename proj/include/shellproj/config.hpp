// Key-value configuration file for sweeps.
//
//   # comment
//   lambdas = 100, 316, 1000
//   delta_rules = power:0.5, fixed:0.1
//   ps = 2, 4, inf
//   kinds = knapp, annulus, random_corona, maximized
//
// Unknown keys and malformed values are rejected with the line number.
#pragma once

#include "shellproj/sweep.hpp"

#include <string>

namespace shellproj {

struct Config {
  SweepPlan plan = SweepPlan::default_plan();
  std::string output_dir = "out";
  /// "csv" or "jsonl"
  std::string format = "csv";
  int workers = 1;

  void validate() const;
};

/// Shortest text that reads back to the same double; "inf" for infinity.
std::string format_exact(double v);
double parse_real(const std::string& text);

Config parse_config(const std::string& text);
/// Canonical form: every key, fixed order, exact numbers.
std::string serialize_config(const Config& config);
Config load_config(const std::string& path);

}  // namespace shellproj
