// Fourier-support geometry of the corona: per-line eta intervals, the f1
// support measure, rescaled strips of the f2 part and the cap partition of
// the thickened unit corona.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace shellproj {

struct CoronaGeometry {
  double lambda = 2;
  double delta = 0.5;

  CoronaGeometry() = default;
  CoronaGeometry(double lambda, double delta);
  double k_plus() const { return lambda + delta; }
};

class IntervalSet {
 public:
  IntervalSet() = default;
  /// Adds (lo, hi), merging with overlapping or touching members. Empty input is ignored.
  void add(double lo, double hi);
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  double measure() const;
  bool contains(double x) const;

 private:
  std::vector<std::pair<double, double>> intervals_;
};

/// First-quadrant eta values with (k, eta) in the open corona, k >= 0.
IntervalSet e_k_interval(std::int64_t k, const CoronaGeometry& geo);

/// Integer k with max(0, lambda - 1/delta) <= k < k_plus.
std::pair<std::int64_t, std::int64_t> f1_line_range(const CoronaGeometry& geo);

double support_measure_f1(const CoronaGeometry& geo);

/// Counts midpoints (m + 1/2) * eta_step in each line's corona section.
double support_measure_f1_oracle(const CoronaGeometry& geo, double eta_step);

struct RescaledStrip {
  std::int64_t k = 0;
  double k_lo = 0;
  double k_hi = 0;
  /// D_k: (sqrt(max(0, (1 - eps)^2 - K^2)), sqrt((1 + eps)^2 - K^2)) with K = k / lambda.
  double h_lo = 0;
  double h_hi = 0;
};

/// Strips of the f2 part, k >= 0 with lambda - k > 1/delta, in (K, H) = (k, eta) / lambda.
class RescaledStripSet {
 public:
  RescaledStripSet() = default;
  RescaledStripSet(double lambda, double delta, std::vector<RescaledStrip> strips);
  double lambda() const { return lambda_; }
  double delta() const { return delta_; }
  double eps() const { return delta_ / lambda_; }
  const std::vector<RescaledStrip>& strips() const { return strips_; }
  /// Index range [first, last) of strips whose K-interval meets [a, b].
  std::pair<std::size_t, std::size_t> overlapping(double a, double b) const;
  bool contains(double K, double H) const;

 private:
  double lambda_ = 2;
  double delta_ = 0.5;
  std::vector<RescaledStrip> strips_;
};

RescaledStripSet rescaled_strips(const CoronaGeometry& geo);

/// Polar box r in (1 - radial_halfwidth, 1 + radial_halfwidth),
/// angle in [center - halfwidth, center + halfwidth], angle measured from the K axis.
struct Cap {
  double center_angle = 0;
  double angular_halfwidth = 0;
  double radial_halfwidth = 0;
  int dyadic_j = -1;

  double angle_lo() const { return center_angle - angular_halfwidth; }
  double angle_hi() const { return center_angle + angular_halfwidth; }
  bool contains(double K, double H) const;
};

std::vector<Cap> cap_partition(const CoronaGeometry& geo);

/// Exact area of cap intersected with the union of strip boxes strip x D_k.
double cap_support_measure(const Cap& cap, const RescaledStripSet& strips);

/// Cell-centre count over a lattice of side `cell`, times cell^2.
double cap_support_oracle(const Cap& cap, const RescaledStripSet& strips, double cell);

/// Number of strips whose box meets the cap in positive area.
int strip_count(const Cap& cap, const RescaledStripSet& strips);

}  // namespace shellproj
