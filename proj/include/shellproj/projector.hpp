// The spectral multiplier chi((sqrt(k^2 + eta^2) - lambda) / delta) and the
// low/high frequency split of corona-supported data.
#pragma once

#include "shellproj/fourier.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace shellproj {

struct SpectralParams {
  double lambda = 2;
  double delta = 0.5;
  double p = 2;

  /// Throws PreconditionError unless lambda > 1, 0 < delta < 1 and p >= 2 (p may be infinite).
  void validate() const {
    if (!(lambda > 1) || !std::isfinite(lambda))
      throw PreconditionError("lambda must satisfy lambda > 1 (got " + std::to_string(lambda) + ")");
    if (!(delta > 0 && delta < 1))
      throw PreconditionError("delta must satisfy 0 < delta < 1 (got " + std::to_string(delta) + ")");
    if (!(p >= 2)) throw PreconditionError("p must satisfy p >= 2 (got " + std::to_string(p) + ")");
  }
};

struct Cutoff {
  enum class Kind { indicator, smooth_bump, truncated_gaussian };
  Kind kind = Kind::indicator;
  double support_radius = 1;

  static Cutoff indicator(double radius = 1) { return {Kind::indicator, radius}; }
  static Cutoff smooth_bump(double radius = 1) { return {Kind::smooth_bump, radius}; }
  static Cutoff truncated_gaussian(double radius = 0.5) { return {Kind::truncated_gaussian, radius}; }

  /// Vanishes for |t| >= support_radius (the boundary is excluded).
  double operator()(double t) const {
    const double a = std::abs(t);
    if (!(a < support_radius)) return 0;
    switch (kind) {
      case Kind::indicator:
        return 1;
      case Kind::smooth_bump: {
        const double s = a / support_radius;
        return std::exp(1 - 1 / (1 - s * s));
      }
      case Kind::truncated_gaussian:
        return std::exp(-std::numbers::pi * t * t);
    }
    return 0;
  }
};

std::string to_string(Cutoff::Kind kind);
Cutoff::Kind cutoff_kind_from_string(const std::string& name);

template <typename Scalar>
bool in_open_corona(Index k, Scalar eta, double lambda, double delta) {
  const long double r = std::hypot(static_cast<long double>(k), static_cast<long double>(eta));
  return r > lambda - static_cast<long double>(delta) && r < lambda + static_cast<long double>(delta);
}

/// Coefficientwise multiplication by chi((|(k, eta)| - lambda) / delta).
template <typename Scalar>
CylinderFunction<Scalar> apply_multiplier(const CylinderFunction<Scalar>& f, const SpectralParams& sp, const Cutoff& chi) {
  CylinderFunction<Scalar> g = f;
  const auto& grid = f.grid();
  for (Index q = 0; q < grid.num_lines(); ++q) {
    const long double k = static_cast<long double>(grid.k(q));
    for (Index m = 0; m < grid.line(q).length; ++m) {
      const long double r = std::hypot(k, static_cast<long double>(grid.eta(q, m)));
      g.at(q, m) *= static_cast<Scalar>(chi(static_cast<double>((r - sp.lambda) / sp.delta)));
    }
  }
  return g;
}

/// P_{lambda,delta} f. The grid must reach k and eta up to lambda + delta * radius.
template <typename Scalar>
CylinderFunction<Scalar> project(const CylinderFunction<Scalar>& f, const SpectralParams& sp, const Cutoff& chi) {
  sp.validate();
  const auto& grid = f.grid();
  const double reach = sp.lambda + sp.delta * chi.support_radius;
  const double eta_reach = static_cast<double>(grid.eta_step()) * static_cast<double>(grid.eta_index_max());
  if (static_cast<double>(grid.k_max()) < reach || eta_reach < reach)
    throw PreconditionError("project: grid must reach k_max >= " + std::to_string(reach) +
                            " and eta_max >= " + std::to_string(reach) + " (has k_max = " +
                            std::to_string(grid.k_max()) + ", eta_max = " + std::to_string(eta_reach) + ")");
  return apply_multiplier(f, sp, chi);
}

/// Whether the k-line sits in the low part |k - lambda| <= 1/delta.
inline bool is_low_line(Index k, double lambda, double delta) {
  return std::abs(static_cast<long double>(k) - static_cast<long double>(lambda)) <= 1.0L / static_cast<long double>(delta);
}

/// (f1, f2) with f1 on k-lines |k - lambda| <= 1/delta and f2 on the rest.
/// f must vanish outside the first-quadrant open corona.
template <typename Scalar>
std::pair<CylinderFunction<Scalar>, CylinderFunction<Scalar>> split_low_high(const CylinderFunction<Scalar>& f,
                                                                             const SpectralParams& sp) {
  sp.validate();
  const auto& grid = f.grid();
  CylinderFunction<Scalar> low(grid), high(grid);
  for (Index q = 0; q < grid.num_lines(); ++q) {
    const Index k = grid.k(q);
    for (Index m = 0; m < grid.line(q).length; ++m) {
      if (f.at(q, m) == std::complex<Scalar>(0)) continue;
      const Scalar eta = grid.eta(q, m);
      if (k < 0 || eta < 0 || !in_open_corona(k, eta, sp.lambda, sp.delta))
        throw PreconditionError("split_low_high: coefficient at (k = " + std::to_string(k) +
                                ", eta = " + std::to_string(static_cast<double>(eta)) +
                                ") lies outside the first-quadrant corona");
    }
    if (is_low_line(k, sp.lambda, sp.delta))
      low.line(q) = f.line(q);
    else
      high.line(q) = f.line(q);
  }
  return {std::move(low), std::move(high)};
}

enum class Regime { low, high };
std::string to_string(Regime r);

struct Bound {
  double value = 0;
  /// lambda^{1/2 - 2/p} delta^{1/2}
  double low_term = 0;
  /// (lambda delta)^{1/4 - 1/(2p)}
  double high_term = 0;
  Regime regime = Regime::high;
};

inline Bound theoretical_bound(const SpectralParams& sp) {
  sp.validate();
  const double inv_p = std::isinf(sp.p) ? 0.0 : 1.0 / sp.p;
  Bound b;
  b.low_term = std::pow(sp.lambda, 0.5 - 2 * inv_p) * std::sqrt(sp.delta);
  b.high_term = std::pow(sp.lambda * sp.delta, 0.25 - 0.5 * inv_p);
  b.value = b.low_term + b.high_term;
  b.regime = b.low_term > b.high_term ? Regime::low : Regime::high;
  return b;
}

}  // namespace shellproj
