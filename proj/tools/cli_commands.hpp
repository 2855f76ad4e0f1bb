// Subcommands of the shellproj command-line tool. Each returns the process
// exit status: 0 success, 1 tolerance violation, 2 usage or validation error.
#pragma once

#include "shellproj/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace shellproj::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitUsage = 2;

int cmd_sweep(const Config& config, bool json, std::ostream& out, std::ostream& err);
int cmd_support(double lambda, double delta, bool json, std::ostream& out, std::ostream& err);
int cmd_example(const std::string& kind, double lambda, double delta, double p, std::uint64_t seed, bool json,
                std::ostream& out, std::ostream& err);
int cmd_plot(const std::string& records_path, const std::string& out_dir, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shellproj::cli
