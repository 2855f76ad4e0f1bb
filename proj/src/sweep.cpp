#include "shellproj/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <new>
#include <thread>
#include <tuple>

namespace shellproj {

std::string to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::knapp:
      return "knapp";
    case RecordKind::annulus:
      return "annulus";
    case RecordKind::random_corona:
      return "random_corona";
    case RecordKind::maximized:
      return "maximized";
  }
  return "?";
}

RecordKind record_kind_from_string(const std::string& name) {
  if (name == "maximized") return RecordKind::maximized;
  switch (example_kind_from_string(name)) {
    case ExampleKind::knapp:
      return RecordKind::knapp;
    case ExampleKind::annulus:
      return RecordKind::annulus;
    case ExampleKind::random_corona:
      return RecordKind::random_corona;
  }
  throw PreconditionError("unknown record kind '" + name + "'");
}

std::string to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::ok:
      return "ok";
    case RecordStatus::echo:
      return "echo";
    case RecordStatus::failed:
      return "failed";
  }
  return "?";
}

RecordStatus record_status_from_string(const std::string& name) {
  if (name == "ok") return RecordStatus::ok;
  if (name == "echo") return RecordStatus::echo;
  if (name == "failed") return RecordStatus::failed;
  throw PreconditionError("unknown record status '" + name + "'");
}

std::string to_string(FitCheck c) {
  switch (c) {
    case FitCheck::match:
      return "match";
    case FitCheck::lower:
      return "lower";
    case FitCheck::none:
      return "none";
  }
  return "?";
}

double DeltaRule::delta(double lambda) const { return type == Type::fixed ? value : std::pow(lambda, -value); }

std::string DeltaRule::label() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%.12g", type == Type::fixed ? "fixed" : "power", value);
  return buf;
}

DeltaRule DeltaRule::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw PreconditionError("delta rule '" + text + "' must be fixed:<delta> or power:<beta>");
  const std::string type = text.substr(0, colon);
  double value = 0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw PreconditionError("delta rule '" + text + "' has a malformed number");
  }
  if (type == "fixed") return fixed(value);
  if (type == "power") return power(value);
  throw PreconditionError("delta rule '" + text + "' must be fixed:<delta> or power:<beta>");
}

void SweepPlan::validate() const {
  if (lambdas.empty() || delta_rules.empty() || ps.empty() || kinds.empty())
    throw PreconditionError("sweep plan needs at least one lambda, delta rule, p and kind");
  if (seeds_per_point < 1) throw PreconditionError("seeds_per_point must be >= 1");
  if (maximize_steps < 0) throw PreconditionError("maximize_steps must be >= 0");
  if (policy.sample_budget < 16 || maximize_sample_budget < 16) throw PreconditionError("sample budgets must be >= 16");
  for (const auto& r : delta_rules)
    if (r.type == DeltaRule::Type::power && !(r.value > 0 && r.value <= 1))
      throw PreconditionError("power delta rule needs beta in (0, 1], got " + std::to_string(r.value));
  for (double l : lambdas) {
    if (!(l > 1) || !std::isfinite(l))
      throw PreconditionError("lambda = " + std::to_string(l) + " violates the hypothesis lambda > 1");
    for (const auto& r : delta_rules) {
      const double d = r.delta(l);
      if (!(d > 0 && d < 1))
        throw PreconditionError("delta = " + std::to_string(d) + " (rule " + r.label() + ", lambda = " +
                                std::to_string(l) + ") violates the hypothesis delta < 1");
    }
  }
  for (double p : ps)
    if (!(p >= 2)) throw PreconditionError("p = " + std::to_string(p) + " must be >= 2");
}

SweepPlan SweepPlan::default_plan() {
  SweepPlan plan;
  plan.lambdas = {100, 316, 1000, 3162, 10000};
  plan.delta_rules = {DeltaRule::power(0.25), DeltaRule::power(0.5), DeltaRule::power(0.75), DeltaRule::power(1),
                      DeltaRule::fixed(0.03), DeltaRule::fixed(0.1),  DeltaRule::fixed(0.3)};
  plan.ps = {2, 4, 6, kInfinity};
  plan.kinds = {RecordKind::knapp, RecordKind::annulus, RecordKind::random_corona, RecordKind::maximized};
  plan.seeds_per_point = 3;
  return plan;
}

bool canonical_less(const SweepRecord& a, const SweepRecord& b) {
  return std::make_tuple(a.lambda, a.delta, a.p, static_cast<int>(a.kind), a.seed) <
         std::make_tuple(b.lambda, b.delta, b.p, static_cast<int>(b.kind), b.seed);
}

void canonical_sort(std::vector<SweepRecord>& records) { std::stable_sort(records.begin(), records.end(), canonical_less); }

std::vector<std::pair<double, double>> plan_points(const SweepPlan& plan) {
  std::vector<std::pair<double, double>> pts;
  for (double l : plan.lambdas)
    for (const auto& r : plan.delta_rules) pts.emplace_back(l, r.delta(l));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

SweepRecord evaluate_record(const SweepPlan& plan, double lambda, double delta, double p, RecordKind kind,
                            std::uint64_t seed) {
  SweepRecord rec;
  rec.lambda = lambda;
  rec.delta = delta;
  rec.p = p;
  rec.kind = kind;
  rec.seed = seed;
  const SpectralParams sp{lambda, delta, p};
  try {
    const Bound b = theoretical_bound(sp);
    rec.bound = b.value;
    rec.regime = b.regime;
    RatioResult r;
    switch (kind) {
      case RecordKind::knapp:
        r = evaluate_ratio(build_knapp(sp, Cutoff::truncated_gaussian(), plan.build), sp, plan.policy);
        break;
      case RecordKind::annulus:
        r = evaluate_ratio(build_annulus(sp, plan.build), sp, plan.policy);
        break;
      case RecordKind::random_corona: {
        ResolutionPolicy policy = plan.policy;
        policy.stationary_extrapolation = true;
        r = evaluate_ratio(build_random_corona(sp, seed, plan.build), sp, policy);
        break;
      }
      case RecordKind::maximized: {
        std::vector<CylinderFunctiond> starts;
        if (lambda == std::floor(lambda)) starts.push_back(build_knapp(sp, Cutoff::truncated_gaussian(), plan.build));
        starts.push_back(build_annulus(sp, plan.build));
        MaximizeOptions opts;
        opts.steps = plan.maximize_steps;
        opts.policy = plan.policy;
        opts.policy.sample_budget = plan.maximize_sample_budget;
        r = maximize_ratio(sp, starts, opts).best;
        break;
      }
    }
    rec.ratio = r.ratio;
    rec.quotient = r.quotient;
    rec.echo = r.resolution_echo;
    rec.status = r.echo_deviation() <= kEchoTolerance ? RecordStatus::ok : RecordStatus::echo;
  } catch (const std::bad_alloc&) {
    rec.status = RecordStatus::failed;
    rec.message = "out of memory";
  } catch (const std::exception& e) {
    rec.status = RecordStatus::failed;
    rec.message = e.what();
  }
  return rec;
}

std::vector<SweepRecord> run_sweep(const SweepPlan& plan, int workers) {
  plan.validate();
  struct Task {
    double lambda, delta, p;
    RecordKind kind;
    std::uint64_t seed;
  };
  std::vector<RecordKind> kinds = plan.kinds;
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  std::vector<double> ps = plan.ps;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<Task> tasks;
  for (const auto& [l, d] : plan_points(plan))
    for (double p : ps)
      for (RecordKind k : kinds) {
        const int n_seeds = k == RecordKind::random_corona ? plan.seeds_per_point : 1;
        for (int s = 0; s < n_seeds; ++s) tasks.push_back({l, d, p, k, static_cast<std::uint64_t>(s)});
      }
  std::vector<SweepRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      records[i] = evaluate_record(plan, t.lambda, t.delta, t.p, t.kind, t.seed);
    }
  };
  const int n = std::max(1, workers);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  canonical_sort(records);
  return records;
}

ExponentFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw PreconditionError("fit_loglog: x and y differ in length");
  if (x.size() < 4) throw PreconditionError("fit_loglog: need at least 4 points, got " + std::to_string(x.size()));
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw PreconditionError("fit_loglog: values must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0)) throw PreconditionError("fit_loglog: x values are all equal");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.n_points = static_cast<int>(x.size());
  return fit;
}

ExponentFit fit_exponent(const std::vector<SweepRecord>& records, FitAxis axis) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (r.p != records.front().p || r.kind != records.front().kind)
      throw PreconditionError("fit_exponent: records must share p and kind");
    x.push_back(axis == FitAxis::lambda ? r.lambda : r.lambda * r.delta);
    y.push_back(r.ratio);
  }
  return fit_loglog(x, y);
}

RegimeBoundary regime_boundary(double lambda, double p) {
  if (!(lambda > 1)) throw PreconditionError("regime_boundary: lambda must exceed 1");
  if (!(p >= 2)) throw PreconditionError("regime_boundary: p must be >= 2");
  RegimeBoundary rb;
  rb.exponent = std::isinf(p) ? -1.0 : -(p - 6) / (p + 2);
  rb.critical_delta = std::pow(lambda, rb.exponent);
  rb.inside_range = rb.critical_delta < 1;
  rb.below = Regime::high;
  return rb;
}

std::vector<SweepRecord> series_records(const std::vector<SweepRecord>& records, RecordKind kind, double p,
                                        const DeltaRule& rule) {
  std::vector<SweepRecord> out;
  for (const auto& r : records)
    if (r.kind == kind && r.p == p && r.status == RecordStatus::ok && r.delta == rule.delta(r.lambda))
      out.push_back(r);
  return out;
}

std::pair<double, FitCheck> expected_slope(RecordKind kind, double p, const DeltaRule& rule) {
  const double inv_p = std::isinf(p) ? 0.0 : 1 / p;
  const double beta = rule.beta();
  switch (kind) {
    case RecordKind::knapp:
      return {(0.25 - 0.5 * inv_p) * (1 - beta), FitCheck::match};
    case RecordKind::annulus:
      if (p == 2) return {0.0, FitCheck::match};
      if (std::isinf(p)) return {0.5 * (1 - beta), FitCheck::match};
      return {0.5 - 2 * inv_p - 0.5 * beta, FitCheck::lower};
    case RecordKind::random_corona:
    case RecordKind::maximized:
      break;
  }
  return {0.0, FitCheck::none};
}

std::vector<FitRow> fit_series(const SweepPlan& plan, const std::vector<SweepRecord>& records) {
  std::vector<FitRow> rows;
  std::vector<double> ps = plan.ps;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<RecordKind> kinds = plan.kinds;
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  for (RecordKind kind : kinds)
    for (double p : ps)
      for (const auto& rule : plan.delta_rules) {
        FitRow row;
        row.kind = kind;
        row.p = p;
        row.rule = rule;
        std::tie(row.expected, row.check) = expected_slope(kind, p, rule);
        std::vector<SweepRecord> series = series_records(records, kind, p, rule);
        // Random records: fit the seed average so each lambda counts once.
        std::map<double, std::pair<double, double>> mean_ratio, mean_quot;
        for (const auto& r : series) {
          mean_ratio[r.lambda].first += std::log(r.ratio);
          mean_ratio[r.lambda].second += 1;
          mean_quot[r.lambda].first += std::log(r.quotient);
          mean_quot[r.lambda].second += 1;
        }
        std::vector<double> x, y, yq;
        for (const auto& [l, acc] : mean_ratio) {
          x.push_back(l);
          y.push_back(std::exp(acc.first / acc.second));
          yq.push_back(std::exp(mean_quot[l].first / mean_quot[l].second));
        }
        if (x.size() >= 4) {
          row.fit = fit_loglog(x, y);
          row.quotient_fit = fit_loglog(x, yq);
        }
        if (row.check == FitCheck::match)
          row.passed = row.fit && std::abs(row.deviation()) <= kFitTolerance;
        else if (row.check == FitCheck::lower)
          row.passed = row.fit && row.deviation() >= -kFitTolerance;
        rows.push_back(row);
      }
  return rows;
}

}  // namespace shellproj
