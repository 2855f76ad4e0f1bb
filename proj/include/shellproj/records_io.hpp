// Record and fit tables, and gnuplot script emission.
#pragma once

#include "shellproj/sweep.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace shellproj {

inline constexpr const char* kRecordsHeader = "lambda,delta,p,kind,seed,ratio,bound,regime,quotient,echo,status";

/// 12 significant digits; "inf" for infinity.
std::string format_real(double v);

void write_records_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_records_jsonl(std::ostream& out, const std::vector<SweepRecord>& records);

/// Parses either format (JSONL when the first non-blank character is '{').
/// Throws PreconditionError naming the offending line.
std::vector<SweepRecord> parse_records(const std::string& text);
std::vector<SweepRecord> read_records(const std::string& path);

void write_fits_csv(std::ostream& out, const std::vector<FitRow>& rows);

/// File name and contents of every emitted plot file.
using EmittedFiles = std::vector<std::pair<std::string, std::string>>;

/// Two gnuplot scripts (ratio and quotient against lambda, log-log) with one
/// panel per (kind, p) present, plus one data file per panel.
EmittedFiles emit_plots(std::vector<SweepRecord> records);

}  // namespace shellproj
