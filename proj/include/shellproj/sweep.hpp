// Parameter sweeps over (lambda, delta, p), log-log exponent fits and the
// crossover between the two terms of the bound.
#pragma once

#include "shellproj/examples.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shellproj {

enum class RecordKind { knapp, annulus, random_corona, maximized };
std::string to_string(RecordKind kind);
RecordKind record_kind_from_string(const std::string& name);

/// delta = value (fixed) or delta = lambda^{-value} (power).
struct DeltaRule {
  enum class Type { fixed, power };
  Type type = Type::fixed;
  double value = 0.1;

  static DeltaRule fixed(double d) { return {Type::fixed, d}; }
  static DeltaRule power(double beta) { return {Type::power, beta}; }
  double delta(double lambda) const;
  /// Exponent beta with delta = lambda^{-beta}; 0 for fixed rules.
  double beta() const { return type == Type::power ? value : 0.0; }
  /// "fixed:0.1" or "power:0.5".
  std::string label() const;
  static DeltaRule parse(const std::string& text);
  friend bool operator==(const DeltaRule&, const DeltaRule&) = default;
};

struct SweepPlan {
  std::vector<double> lambdas;
  std::vector<DeltaRule> delta_rules;
  std::vector<double> ps;
  std::vector<RecordKind> kinds;
  int seeds_per_point = 3;
  BuildOptions build;
  ResolutionPolicy policy;
  int maximize_steps = 4;
  Index maximize_sample_budget = Index{1} << 20;

  /// Throws PreconditionError on the first violated hypothesis.
  void validate() const;
  static SweepPlan default_plan();
};

enum class RecordStatus { ok, echo, failed };
std::string to_string(RecordStatus s);
RecordStatus record_status_from_string(const std::string& name);

struct SweepRecord {
  double lambda = 0;
  double delta = 0;
  double p = 2;
  RecordKind kind = RecordKind::knapp;
  std::uint64_t seed = 0;
  double ratio = 0;
  double bound = 0;
  Regime regime = Regime::high;
  double quotient = 0;
  double echo = 0;
  RecordStatus status = RecordStatus::ok;
  std::string message;
};

/// Resolution echo tolerance for accepted records.
inline constexpr double kEchoTolerance = 0.02;

/// Canonical order: (lambda, delta, p, kind, seed).
bool canonical_less(const SweepRecord& a, const SweepRecord& b);
void canonical_sort(std::vector<SweepRecord>& records);

/// Distinct (lambda, delta) pairs of the plan.
std::vector<std::pair<double, double>> plan_points(const SweepPlan& plan);

/// Evaluates one record; errors are caught and reported in the record.
SweepRecord evaluate_record(const SweepPlan& plan, double lambda, double delta, double p, RecordKind kind,
                            std::uint64_t seed);

/// One record per distinct (lambda, delta, p, kind, seed), canonically ordered.
std::vector<SweepRecord> run_sweep(const SweepPlan& plan, int workers = 1);

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  int n_points = 0;
};

/// Least squares of log y against log x; needs at least 4 points.
ExponentFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

enum class FitAxis { lambda, lambda_delta };
/// Fit of log(ratio) against log(lambda) or log(lambda delta). Records must share p and kind.
ExponentFit fit_exponent(const std::vector<SweepRecord>& records, FitAxis axis);

struct RegimeBoundary {
  /// delta* = lambda^{exponent}, exponent = -(p - 6) / (p + 2) (-1 at p = inf).
  double exponent = 0;
  double critical_delta = 0;
  /// False when delta* >= 1, i.e. one term dominates for every admissible delta.
  bool inside_range = false;
  /// Regime for delta < min(delta*, 1).
  Regime below = Regime::high;
};
RegimeBoundary regime_boundary(double lambda, double p);

/// Records of the plan's series (kind, p, rule) that pass the echo check.
std::vector<SweepRecord> series_records(const std::vector<SweepRecord>& records, RecordKind kind, double p,
                                        const DeltaRule& rule);

enum class FitCheck { match, lower, none };
std::string to_string(FitCheck c);

struct FitRow {
  RecordKind kind = RecordKind::knapp;
  double p = 2;
  DeltaRule rule;
  std::optional<ExponentFit> fit;
  std::optional<ExponentFit> quotient_fit;
  double expected = 0;
  FitCheck check = FitCheck::none;
  bool passed = true;

  double deviation() const { return fit ? fit->slope - expected : 0.0; }
};

inline constexpr double kFitTolerance = 0.03;

/// Slope of log ratio against log lambda predicted for each series, and how it is checked.
std::pair<double, FitCheck> expected_slope(RecordKind kind, double p, const DeltaRule& rule);

std::vector<FitRow> fit_series(const SweepPlan& plan, const std::vector<SweepRecord>& records);

}  // namespace shellproj
