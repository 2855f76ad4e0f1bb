#include "shellproj/examples.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace shellproj {

namespace {

// Indices m >= m_floor with (k, m h) in the open corona, as a contiguous run.
LineSpan corona_run(Index k, double h, double lambda, double delta, Index m_floor) {
  auto member = [&](Index m) { return in_open_corona(k, static_cast<double>(m) * h, lambda, delta); };
  const double kd = static_cast<double>(k);
  const double outer = lambda + delta;
  if (std::abs(kd) >= outer) return {};
  const double inner = lambda - delta;
  const double a = std::sqrt(std::max(0.0, inner * inner - kd * kd)) / h;
  const double b = std::sqrt(outer * outer - kd * kd) / h;
  Index lo = inner <= std::abs(kd) ? m_floor : std::max<Index>(m_floor, static_cast<Index>(std::floor(a)) - 1);
  const Index top = static_cast<Index>(std::ceil(b)) + 1;
  while (lo <= top && !member(lo)) ++lo;
  if (lo > top) return {};
  Index hi = lo;
  while (member(hi + 1)) ++hi;
  return {lo, hi - lo + 1};
}

double golden_max(const std::function<double(double)>& g, double a, double b, double& arg) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 30; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(x1);
    }
  }
  arg = f1 > f2 ? x1 : x2;
  return std::max(f1, f2);
}

// Grid maximum of |f| on the sub-lattice of the given stride, refined by
// alternating golden-section searches around it with direct evaluation.
double refined_peak(const CylinderFunctiond& f, const PhysicalGridd& pg, const ComplexGrid<double>& samples, Index stride) {
  Index bj = 0, bl = 0;
  double best = -1;
  for (Index l = 0; l < pg.n_y; l += stride)
    for (Index j = 0; j < pg.n_x; j += stride) {
      const double v = std::abs(samples(j, l));
      if (v > best) best = v, bj = j, bl = l;
    }
  double x = pg.x(bj), y = pg.y(bl);
  const double hx = static_cast<double>(stride) / static_cast<double>(pg.n_x);
  const double hy = static_cast<double>(stride) * pg.dy();
  for (int round = 0; round < 2; ++round) {
    double arg = x;
    const double vx = golden_max([&](double t) { return std::abs(evaluate_point(f, t, y)); }, x - hx, x + hx, arg);
    if (vx > best) best = vx, x = arg;
    arg = y;
    const double vy = golden_max([&](double t) { return std::abs(evaluate_point(f, x, t)); }, y - hy, y + hy, arg);
    if (vy > best) best = vy, y = arg;
  }
  return best;
}

RatioResult ratio_with(Synthesizer<double>& synth, const CylinderFunctiond& f, const SpectralParams& sp,
                       const ResolutionPolicy& policy) {
  const auto& pg = synth.physical_grid();
  const ComplexGrid<double> samples = synth.synthesize(f);
  LpNorm norm = lp_norm(samples, pg, sp.p);
  if (std::isinf(sp.p)) {
    norm.value = std::max(norm.value, refined_peak(f, pg, samples, 1));
    norm.half_resolution = std::max(norm.half_resolution, refined_peak(f, pg, samples, 2));
  }
  const double period = 1 / f.grid().eta_step();
  const double fraction = std::min(1.0, static_cast<double>(pg.n_y) * pg.dy() / period);
  const bool extrapolate = policy.stationary_extrapolation && !std::isinf(sp.p) && fraction < 1;
  if (extrapolate) {
    const double scale = std::pow(fraction, -1 / sp.p);
    norm.value *= scale;
    norm.half_resolution *= scale;
  }
  const double l2 = l2_norm_frequency(f);
  if (!(l2 > 0)) throw PreconditionError("evaluate_ratio: function is zero");
  const Bound b = theoretical_bound(sp);
  RatioResult r;
  r.ratio = norm.value / l2;
  r.resolution_echo = norm.half_resolution / l2;
  r.bound = b.value;
  r.quotient = r.ratio / b.value;
  r.regime = b.regime;
  r.grid = pg;
  r.window_fraction = fraction;
  r.extrapolated = extrapolate;
  return r;
}

void require_supported_in_corona(const CylinderFunctiond& f, const SpectralParams& sp) {
  const auto& g = f.grid();
  for (Index q = 0; q < g.num_lines(); ++q)
    for (Index m = 0; m < g.line(q).length; ++m)
      if (f.at(q, m) != std::complex<double>(0) && !in_open_corona(g.k(q), g.eta(q, m), sp.lambda, sp.delta))
        throw PreconditionError("start is not supported in the corona: coefficient at (k = " + std::to_string(g.k(q)) +
                                ", eta = " + std::to_string(g.eta(q, m)) + ")");
}

}  // namespace

std::string to_string(ExampleKind kind) {
  switch (kind) {
    case ExampleKind::knapp:
      return "knapp";
    case ExampleKind::annulus:
      return "annulus";
    case ExampleKind::random_corona:
      return "random_corona";
  }
  return "?";
}

ExampleKind example_kind_from_string(const std::string& name) {
  if (name == "knapp") return ExampleKind::knapp;
  if (name == "annulus") return ExampleKind::annulus;
  if (name == "random_corona") return ExampleKind::random_corona;
  throw PreconditionError("unknown example kind '" + name + "'");
}

double default_eta_step(double delta, const BuildOptions& opts) {
  if (!(opts.eta_step_multiplier > 0)) throw PreconditionError("eta_step multiplier must be positive");
  return opts.eta_step_multiplier * delta / 16;
}

CylinderFunctiond build_knapp(const SpectralParams& sp, const Cutoff& profile, const BuildOptions& opts) {
  sp.validate();
  if (sp.lambda != std::floor(sp.lambda))
    throw PreconditionError("knapp example needs integer lambda (assume lambda in N), got " + std::to_string(sp.lambda));
  const double h = default_eta_step(sp.delta, opts);
  const double scale = std::sqrt(sp.lambda * sp.delta);
  const auto k = static_cast<Index>(sp.lambda);
  // Largest m with m h / scale strictly inside the profile support.
  Index half = static_cast<Index>(std::floor(profile.support_radius * scale / h));
  while (half > 0 && profile(static_cast<double>(half) * h / scale) == 0) --half;
  std::vector<LineSpan> lines{{-half, 2 * half + 1}};
  FrequencyGrid<double> grid(k, h, lines);
  CylinderFunctiond g(grid);
  for (Index m = 0; m < 2 * half + 1; ++m) {
    const double eta = grid.eta(0, m);
    const double v = profile(eta / scale);
    if (v != 0 && !in_open_corona(k, eta, sp.lambda, sp.delta))
      throw PreconditionError("knapp profile leaves the corona at eta = " + std::to_string(eta));
    g.at(0, m) = v;
  }
  return g;
}

CylinderFunctiond build_annulus(const SpectralParams& sp, const BuildOptions& opts) {
  sp.validate();
  if (!(sp.lambda > 2)) throw PreconditionError("annulus example needs lambda > 2");
  const double h = default_eta_step(sp.delta, opts);
  const auto k_last = static_cast<Index>(std::floor(sp.lambda / 2));
  std::vector<LineSpan> lines;
  for (Index k = 0; k <= k_last; ++k) lines.push_back(corona_run(k, h, sp.lambda, sp.delta, 0));
  CylinderFunctiond f(FrequencyGrid<double>(0, h, std::move(lines)));
  f.coeffs().setOnes();
  return f;
}

CylinderFunctiond build_random_corona(const SpectralParams& sp, std::uint64_t seed, const BuildOptions& opts) {
  sp.validate();
  const double h = default_eta_step(sp.delta, opts);
  const auto k_end = static_cast<Index>(std::ceil(sp.lambda + sp.delta));
  std::vector<LineSpan> lines;
  for (Index k = 0; k < k_end; ++k) lines.push_back(corona_run(k, h, sp.lambda, sp.delta, 0));
  CylinderFunctiond f(FrequencyGrid<double>(0, h, std::move(lines)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (Index i = 0; i < f.coeffs().size(); ++i) {
    const double re = normal(rng);
    f.coeffs()[i] = {re, normal(rng)};
  }
  f.coeffs() /= l2_norm_frequency(f);
  return f;
}

CylinderFunctiond build_example(const ExampleSpec& spec, const BuildOptions& opts) {
  switch (spec.kind) {
    case ExampleKind::knapp:
      return build_knapp(spec.sp, spec.profile, opts);
    case ExampleKind::annulus:
      return build_annulus(spec.sp, opts);
    case ExampleKind::random_corona:
      return build_random_corona(spec.sp, spec.seed, opts);
  }
  throw PreconditionError("unknown example kind");
}

RatioResult evaluate_ratio(const CylinderFunctiond& f, const SpectralParams& sp, const ResolutionPolicy& policy) {
  sp.validate();
  Synthesizer<double> synth(f.grid(), resolve_physical_grid(f.grid(), sp.p, policy));
  return ratio_with(synth, f, sp, policy);
}

LpPowerGradient lp_power_and_gradient(Synthesizer<double>& synth, const ComplexVector<double>& c, double p) {
  if (!(p >= 2) || std::isinf(p)) throw PreconditionError("lp_power_and_gradient: p must be finite and >= 2");
  const ComplexGrid<double> u = synth.synthesize(CylinderFunctiond(synth.grid(), c));
  const double w = synth.physical_grid().cell_weight();
  ComplexGrid<double> pull(u.rows(), u.cols());
  long double total = 0;
  for (Index i = 0; i < u.size(); ++i) {
    const double a2 = std::norm(u.data()[i]);
    const double a_pm2 = detail::norm_pow(a2, p - 2);
    total += a_pm2 * a2;
    pull.data()[i] = u.data()[i] * (p * w * a_pm2);
  }
  return {static_cast<double>(w * total), synth.adjoint(pull)};
}

CylinderFunctiond extend_to_corona(const CylinderFunctiond& f, const SpectralParams& sp) {
  const auto& g = f.grid();
  const double h = g.eta_step();
  std::vector<LineSpan> lines;
  for (Index q = 0; q < g.num_lines(); ++q) {
    const auto line = f.line(q);
    Index first_nz = -1, last_nz = -1;
    for (Index m = 0; m < line.size(); ++m)
      if (line[m] != std::complex<double>(0)) {
        if (first_nz < 0) first_nz = m;
        last_nz = m;
      }
    if (first_nz < 0) {
      lines.push_back({});
      continue;
    }
    const Index lo_idx = g.line(q).first + first_nz, hi_idx = g.line(q).first + last_nz;
    const Index k = g.k(q);
    LineSpan run;
    if (std::abs(static_cast<double>(k) - sp.lambda) < sp.delta) {
      const double b = std::sqrt(std::pow(sp.lambda + sp.delta, 2) - static_cast<double>(k * k)) / h;
      run = corona_run(k, h, sp.lambda, sp.delta, -static_cast<Index>(std::ceil(b)) - 1);
    } else if (lo_idx >= 0) {
      run = corona_run(k, h, sp.lambda, sp.delta, 0);
    } else {
      const LineSpan pos = corona_run(k, h, sp.lambda, sp.delta, 0);
      run = {-(pos.first + pos.length - 1), pos.length};
    }
    if (run.length == 0 || lo_idx < run.first || hi_idx > run.first + run.length - 1)
      throw PreconditionError("extend_to_corona: support on k = " + std::to_string(k) +
                              " is not inside one corona section");
    lines.push_back(run);
  }
  CylinderFunctiond out(FrequencyGrid<double>(g.k_min(), h, lines));
  const auto& og = out.grid();
  for (Index q = 0; q < g.num_lines(); ++q) {
    if (og.line(q).length == 0) continue;
    for (Index m = 0; m < g.line(q).length; ++m) {
      const Index idx = g.line(q).first + m;
      const Index mm = idx - og.line(q).first;
      if (mm >= 0 && mm < og.line(q).length) out.at(q, mm) = f.at(q, m);
    }
  }
  return out;
}

MaximizeResult maximize_ratio(const SpectralParams& sp, const std::vector<CylinderFunctiond>& starts,
                              const MaximizeOptions& opts) {
  sp.validate();
  const bool inf = std::isinf(sp.p);
  if (!inf && (sp.p != std::floor(sp.p) || static_cast<long long>(sp.p) % 2 != 0))
    throw PreconditionError("maximize_ratio: p must be an even integer or infinite (got " + std::to_string(sp.p) + ")");
  if (starts.empty()) throw PreconditionError("maximize_ratio: no starts");
  MaximizeResult result;
  bool have = false;
  for (const auto& start : starts) {
    require_supported_in_corona(start, sp);
    CylinderFunctiond f = extend_to_corona(start, sp);
    Synthesizer<double> synth(f.grid(), resolve_physical_grid(f.grid(), sp.p, opts.policy));
    const double h = f.grid().eta_step();
    ComplexVector<double> c = f.coeffs() / l2_norm_frequency(f);
    double tau = 0;
    if (inf) tau = opts.temperature * synth.synthesize(CylinderFunctiond(f.grid(), c)).cwiseAbs().maxCoeff();

    // log R at c; optionally the ascent direction in the h-weighted metric.
    auto objective = [&](const ComplexVector<double>& x, ComplexVector<double>* dir) {
      const double d = h * x.squaredNorm();
      if (!inf) {
        LpPowerGradient lg = lp_power_and_gradient(synth, x, sp.p);
        if (dir) *dir = lg.gradient / (sp.p * h * lg.value) - x / d;
        return std::log(lg.value) / sp.p - 0.5 * std::log(d);
      }
      const ComplexGrid<double> u = synth.synthesize(CylinderFunctiond(f.grid(), x));
      const double umax = u.cwiseAbs().maxCoeff();
      // Terms below e^-40 of the largest do not register in the sum.
      const double cut = umax - 40 * tau;
      long double z = 0;
      for (Index i = 0; i < u.size(); ++i) {
        const double a = std::abs(u.data()[i]);
        if (a > cut) z += std::exp((a - umax) / tau);
      }
      const double smooth = umax + tau * static_cast<double>(std::log(z));
      if (dir) {
        ComplexGrid<double> pull = ComplexGrid<double>::Zero(u.rows(), u.cols());
        const double inv_z = static_cast<double>(1 / z);
        for (Index i = 0; i < u.size(); ++i) {
          const double a = std::abs(u.data()[i]);
          if (a > cut && a > 0) pull.data()[i] = u.data()[i] * (std::exp((a - umax) / tau) * inv_z / a);
        }
        *dir = synth.adjoint(pull) / (h * smooth) - x / d;
      }
      return std::log(smooth) - 0.5 * std::log(d);
    };

    std::vector<double> history;
    ComplexVector<double> dir;
    double value = objective(c, &dir);
    history.push_back(value);
    // At p = 2 the ratio is 1 for every f, so any start is already a maximizer.
    const int steps = sp.p == 2 ? 0 : opts.steps;
    for (int step = 0; step < steps; ++step) {
      const double slope = h * dir.squaredNorm();
      if (!(slope > 0) || !std::isfinite(slope)) break;
      bool accepted = false;
      double t = 1.0, v = value;
      for (int bt = 0; bt < opts.max_backtracks; ++bt, t *= 0.5) {
        ComplexVector<double> trial = c + t * dir;
        v = objective(trial, nullptr);
        if (std::isfinite(v) && v >= value + opts.armijo * t * slope) {
          c = trial / std::sqrt(h * trial.squaredNorm());
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      // log R is scale invariant; keep the accepted value rather than its rounded re-evaluation.
      objective(c, &dir);
      value = v;
      history.push_back(value);
    }

    const RatioResult at_start = ratio_with(synth, f, sp, opts.policy);
    RatioResult best = ratio_with(synth, CylinderFunctiond(f.grid(), c), sp, opts.policy);
    if (at_start.ratio > best.ratio) best = at_start;
    if (!have || best.ratio > result.best.ratio) {
      result.best = best;
      result.start_ratio = at_start.ratio;
      result.history = std::move(history);
      have = true;
    }
  }
  return result;
}

}  // namespace shellproj
