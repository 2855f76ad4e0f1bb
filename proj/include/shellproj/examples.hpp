// Test functions for the L^2 -> L^p norm of the projector: the single-line
// wave packet, the half-annulus indicator, random corona data, and a local
// ascent on ||f||_p / ||f||_2 over corona-supported data.
#pragma once

#include "shellproj/fourier.hpp"
#include "shellproj/projector.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace shellproj {

enum class ExampleKind { knapp, annulus, random_corona };
std::string to_string(ExampleKind kind);
ExampleKind example_kind_from_string(const std::string& name);

struct BuildOptions {
  /// eta_step = eta_step_multiplier * delta / 16.
  double eta_step_multiplier = 1.0;
};

struct ExampleSpec {
  ExampleKind kind = ExampleKind::knapp;
  SpectralParams sp;
  std::uint64_t seed = 0;
  Cutoff profile = Cutoff::truncated_gaussian();
};

double default_eta_step(double delta, const BuildOptions& opts = {});

/// One line k = lambda with coefficients profile(eta / sqrt(lambda delta)).
/// Requires integer lambda; every nonzero sample must lie in the open corona.
CylinderFunctiond build_knapp(const SpectralParams& sp, const Cutoff& profile = Cutoff::truncated_gaussian(),
                              const BuildOptions& opts = {});

/// Indicator of the open corona on 0 <= k <= lambda/2, eta >= 0.
CylinderFunctiond build_annulus(const SpectralParams& sp, const BuildOptions& opts = {});

/// Standard complex Gaussians on every first-quadrant corona sample, scaled to unit L^2 norm.
CylinderFunctiond build_random_corona(const SpectralParams& sp, std::uint64_t seed, const BuildOptions& opts = {});

CylinderFunctiond build_example(const ExampleSpec& spec, const BuildOptions& opts = {});

struct RatioResult {
  double ratio = 0;
  double bound = 0;
  double quotient = 0;
  double resolution_echo = 0;
  Regime regime = Regime::high;
  /// Physical grid used, for diagnostics.
  PhysicalGridd grid;
  /// Sampled y-length over the full period 1 / eta_step.
  double window_fraction = 1;
  /// Whether ratio and echo were rescaled from the window to the period.
  bool extrapolated = false;

  double echo_deviation() const { return ratio > 0 ? std::abs(ratio - resolution_echo) / ratio : 0.0; }
};

/// ||f||_p / ||f||_2 with ||f||_2 from the coefficients and ||f||_p on the
/// resolved physical grid. For p = inf the grid maximum is refined locally.
RatioResult evaluate_ratio(const CylinderFunctiond& f, const SpectralParams& sp, const ResolutionPolicy& policy = {});

/// N = sum w |u|^p over the grid and the coefficient-space gradient of N,
/// where u is the synthesis of c: dN = Re(gradient^H dc).
struct LpPowerGradient {
  double value = 0;
  ComplexVector<double> gradient;
};
LpPowerGradient lp_power_and_gradient(Synthesizer<double>& synth, const ComplexVector<double>& c, double p);

struct MaximizeOptions {
  int steps = 6;
  double armijo = 1e-4;
  int max_backtracks = 30;
  /// p = inf objective uses tau log sum exp(|u| / tau) with tau = temperature * max|u|.
  double temperature = 1e-3;
  ResolutionPolicy policy;
};

struct MaximizeResult {
  RatioResult best;
  /// Start ratio on the extended grid, before any step.
  double start_ratio = 0;
  /// Objective log R of every accepted iterate, starting with the initial point.
  std::vector<double> history;
};

/// Projected ascent on log(||f||_p / ||f||_2). Each start is embedded in the
/// corona sections of its k-lines that meet its support; the best point over
/// all starts is returned. Requires p even or infinite.
MaximizeResult maximize_ratio(const SpectralParams& sp, const std::vector<CylinderFunctiond>& starts,
                              const MaximizeOptions& opts = {});

/// The same function on the corona sections (of its own k-lines) that meet its support.
CylinderFunctiond extend_to_corona(const CylinderFunctiond& f, const SpectralParams& sp);

}  // namespace shellproj
