#include "shellproj/geometry.hpp"

#include "shellproj/fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace shellproj {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct GaussLegendre {
  static constexpr int n = 24;
  std::array<double, n> x{};
  std::array<double, n> w{};

  GaussLegendre() {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2 / ((1 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre gl;
  return gl;
}

struct CapFrame {
  double r1, r2, phi1, phi2;
  double tan1, tan2;
  bool upper_ray;
  double k_min, k_max;

  explicit CapFrame(const Cap& cap) {
    r1 = 1 - cap.radial_halfwidth;
    r2 = 1 + cap.radial_halfwidth;
    phi1 = std::max(0.0, cap.angle_lo());
    phi2 = std::min(kHalfPi, cap.angle_hi());
    tan1 = std::tan(phi1);
    upper_ray = phi2 < kHalfPi;
    tan2 = upper_ray ? std::tan(phi2) : std::numeric_limits<double>::infinity();
    k_min = upper_ray ? r1 * std::cos(phi2) : 0.0;
    k_max = r2 * std::cos(phi1);
  }

  // H-range of the cap on the vertical line through K > 0.
  std::pair<double, double> h_range(double K) const {
    const double lo = std::max(std::sqrt(std::max(0.0, r1 * r1 - K * K)), K * tan1);
    double hi = std::sqrt(std::max(0.0, r2 * r2 - K * K));
    if (upper_ray) hi = std::min(hi, K * tan2);
    return {lo, hi};
  }
};

// Area of the cap met with the union of strip boxes first..last-1.
double measure_over(const CapFrame& f, const RescaledStripSet& set, std::size_t first, std::size_t last) {
  if (first >= last || f.k_min >= f.k_max) return 0;
  const auto& strips = set.strips();
  std::vector<double> cuts{f.k_min, f.k_max, f.r1 * std::cos(f.phi1), f.r1, f.r2};
  if (f.upper_ray) {
    cuts.push_back(f.r1 * std::cos(f.phi2));
    cuts.push_back(f.r2 * std::cos(f.phi2));
  }
  for (std::size_t s = first; s < last; ++s) {
    cuts.push_back(strips[s].k_lo);
    cuts.push_back(strips[s].k_hi);
    for (double v : {strips[s].h_lo, strips[s].h_hi}) {
      if (v < f.r1) cuts.push_back(std::sqrt(f.r1 * f.r1 - v * v));
      if (v < f.r2) cuts.push_back(std::sqrt(f.r2 * f.r2 - v * v));
      if (f.tan1 > 0) cuts.push_back(v / f.tan1);
      if (f.upper_ray && f.tan2 > 0) cuts.push_back(v / f.tan2);
    }
  }
  const double a = std::max(f.k_min, strips[first].k_lo);
  const double b = std::min(f.k_max, strips[last - 1].k_hi);
  if (!(a < b)) return 0;
  std::vector<double> pts{a, b};
  for (double c : cuts)
    if (c > a && c < b) pts.push_back(c);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<std::pair<double, double>> pieces;
  auto integrand = [&](double K) {
    const auto [lo, hi] = f.h_range(K);
    if (!(hi > lo)) return 0.0;
    pieces.clear();
    for (std::size_t s = first; s < last; ++s) {
      const auto& st = strips[s];
      if (st.k_lo > K) break;
      if (st.k_hi < K) continue;
      const double x = std::max(lo, st.h_lo), y = std::min(hi, st.h_hi);
      if (y > x) pieces.emplace_back(x, y);
    }
    if (pieces.empty()) return 0.0;
    std::sort(pieces.begin(), pieces.end());
    double total = 0, cur_lo = pieces[0].first, cur_hi = pieces[0].second;
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      if (pieces[i].first > cur_hi) {
        total += cur_hi - cur_lo;
        cur_lo = pieces[i].first;
        cur_hi = pieces[i].second;
      } else {
        cur_hi = std::max(cur_hi, pieces[i].second);
      }
    }
    return total + (cur_hi - cur_lo);
  };

  const auto& gl = gauss_legendre();
  double area = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    const double half = 0.5 * (pts[i + 1] - pts[i]);
    double panel = 0;
    for (int n = 0; n < GaussLegendre::n; ++n) panel += gl.w[n] * integrand(mid + half * gl.x[n]);
    area += half * panel;
  }
  return area;
}

}  // namespace

CoronaGeometry::CoronaGeometry(double lambda_, double delta_) : lambda(lambda_), delta(delta_) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw PreconditionError("CoronaGeometry: lambda must be positive");
  if (!(delta > 0) || !(delta < lambda)) throw PreconditionError("CoronaGeometry: delta must lie in (0, lambda)");
}

void IntervalSet::add(double lo, double hi) {
  if (!(lo < hi)) return;
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), std::make_pair(lo, hi));
  it = intervals_.insert(it, {lo, hi});
  if (it != intervals_.begin() && std::prev(it)->second >= it->first) it = std::prev(it);
  while (std::next(it) != intervals_.end() && std::next(it)->first <= it->second) {
    it->second = std::max(it->second, std::next(it)->second);
    intervals_.erase(std::next(it));
  }
}

double IntervalSet::measure() const {
  double m = 0;
  for (const auto& [lo, hi] : intervals_) m += hi - lo;
  return m;
}

bool IntervalSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(), [x](const auto& iv) { return iv.first < x && x < iv.second; });
}

IntervalSet e_k_interval(std::int64_t k, const CoronaGeometry& geo) {
  if (k < 0) throw PreconditionError("e_k_interval: k must be nonnegative (got " + std::to_string(k) + ")");
  IntervalSet out;
  const double kd = static_cast<double>(k);
  const double kp = geo.k_plus();
  if (kd >= kp) return out;
  const double top = std::sqrt(kp * kp - kd * kd);
  if (std::abs(kd - geo.lambda) < geo.delta) {
    out.add(0, top);
  } else {
    const double inner = geo.lambda - geo.delta;
    out.add(std::sqrt(inner * inner - kd * kd), top);
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> f1_line_range(const CoronaGeometry& geo) {
  const double lower = std::max(0.0, geo.lambda - 1 / geo.delta);
  return {static_cast<std::int64_t>(std::ceil(lower)), static_cast<std::int64_t>(std::ceil(geo.k_plus()))};
}

double support_measure_f1(const CoronaGeometry& geo) {
  const auto [k0, k1] = f1_line_range(geo);
  double total = 0;
  for (std::int64_t k = k0; k < k1; ++k) total += e_k_interval(k, geo).measure();
  return total;
}

double support_measure_f1_oracle(const CoronaGeometry& geo, double eta_step) {
  if (!(eta_step > 0) || eta_step > geo.delta / 50)
    throw PreconditionError("support_measure_f1_oracle: eta_step must lie in (0, delta/50]");
  const auto [k0, k1] = f1_line_range(geo);
  const long double lo_r = geo.lambda - static_cast<long double>(geo.delta);
  const long double hi_r = geo.lambda + static_cast<long double>(geo.delta);
  const long double lo2 = std::max(0.0L, lo_r) * std::max(0.0L, lo_r), hi2 = hi_r * hi_r;
  double total = 0;
  for (std::int64_t k = k0; k < k1; ++k) {
    const long double k2 = static_cast<long double>(k) * k;
    auto member = [&](std::int64_t m) {
      const long double eta = (m + 0.5L) * eta_step;
      const long double r2 = k2 + eta * eta;
      return r2 > lo2 && r2 < hi2;
    };
    // Bracket the section roughly, then widen until both ends are outside.
    const long double a = std::sqrt(std::max(0.0L, lo2 - k2)), b = std::sqrt(std::max(0.0L, hi2 - k2));
    std::int64_t m_lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(a / eta_step) - 2);
    std::int64_t m_hi = static_cast<std::int64_t>(b / eta_step) + 2;
    while (m_lo > 0 && member(m_lo)) --m_lo;
    while (member(m_hi)) ++m_hi;
    std::int64_t count = 0;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) count += member(m);
    total += static_cast<double>(count) * eta_step;
  }
  return total;
}

RescaledStripSet::RescaledStripSet(double lambda, double delta, std::vector<RescaledStrip> strips)
    : lambda_(lambda), delta_(delta), strips_(std::move(strips)) {
  std::sort(strips_.begin(), strips_.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
}

std::pair<std::size_t, std::size_t> RescaledStripSet::overlapping(double a, double b) const {
  auto first = std::partition_point(strips_.begin(), strips_.end(), [a](const RescaledStrip& s) { return s.k_hi < a; });
  auto last = std::partition_point(first, strips_.end(), [b](const RescaledStrip& s) { return s.k_lo <= b; });
  return {static_cast<std::size_t>(first - strips_.begin()), static_cast<std::size_t>(last - strips_.begin())};
}

bool RescaledStripSet::contains(double K, double H) const {
  if (!(H > 0)) return false;
  const double e = eps();
  const double lo2 = (1 - e) * (1 - e), hi2 = (1 + e) * (1 + e);
  const auto [first, last] = overlapping(K, K);
  for (std::size_t s = first; s < last; ++s) {
    const auto& st = strips_[s];
    if (!(st.k_lo < K && K < st.k_hi)) continue;
    const double kk = static_cast<double>(st.k) / lambda_;
    const double r2 = kk * kk + H * H;
    if (r2 > lo2 && r2 < hi2) return true;
  }
  return false;
}

RescaledStripSet rescaled_strips(const CoronaGeometry& geo) {
  const double e = geo.delta / geo.lambda;
  std::vector<RescaledStrip> strips;
  for (std::int64_t k = 0; geo.lambda - static_cast<double>(k) > 1 / geo.delta; ++k) {
    const double K = static_cast<double>(k) / geo.lambda;
    RescaledStrip s;
    s.k = k;
    s.k_lo = std::max(0.0, K - 2 * e);
    s.k_hi = K + 2 * e;
    s.h_lo = std::sqrt(std::max(0.0, (1 - e) * (1 - e) - K * K));
    s.h_hi = std::sqrt((1 + e) * (1 + e) - K * K);
    strips.push_back(s);
  }
  return {geo.lambda, geo.delta, std::move(strips)};
}

bool Cap::contains(double K, double H) const {
  const double r = std::hypot(K, H);
  if (!(r > 1 - radial_halfwidth && r < 1 + radial_halfwidth)) return false;
  const double phi = std::atan2(H, K);
  return phi >= angle_lo() && phi <= angle_hi();
}

std::vector<Cap> cap_partition(const CoronaGeometry& geo) {
  const double e = geo.delta / geo.lambda;
  if (!(e < 1.0 / 9)) throw PreconditionError("cap_partition: corona too thick, need delta/lambda < 1/9");
  const auto n = static_cast<std::int64_t>(std::ceil(kHalfPi / std::sqrt(e)));
  const double width = kHalfPi / static_cast<double>(n);
  const RescaledStripSet strips = rescaled_strips(geo);
  std::vector<Cap> caps;
  caps.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    Cap cap;
    cap.center_angle = (static_cast<double>(i) + 0.5) * width;
    cap.angular_halfwidth = 0.5 * width;
    cap.radial_halfwidth = 3 * e;
    if (cap_support_measure(cap, strips) > 0) {
      const double d = std::max(1 / geo.delta, geo.lambda * (1 - std::cos(cap.center_angle)));
      cap.dyadic_j = static_cast<int>(std::floor(std::log2(d))) + 1;
    }
    caps.push_back(cap);
  }
  return caps;
}

double cap_support_measure(const Cap& cap, const RescaledStripSet& strips) {
  const CapFrame f(cap);
  const auto [first, last] = strips.overlapping(f.k_min, f.k_max);
  return measure_over(f, strips, first, last);
}

double cap_support_oracle(const Cap& cap, const RescaledStripSet& strips, double cell) {
  if (!(cell > 0) || cell > strips.eps() / 20)
    throw PreconditionError("cap_support_oracle: cell must lie in (0, (delta/lambda)/20]");
  const CapFrame f(cap);
  const double r1sq = f.r1 * f.r1, r2sq = f.r2 * f.r2;
  const auto i0 = static_cast<std::int64_t>(std::floor(f.k_min / cell)) - 1;
  const auto i1 = static_cast<std::int64_t>(std::ceil(f.k_max / cell)) + 1;
  std::int64_t count = 0;
  for (std::int64_t i = std::max<std::int64_t>(i0, 0); i <= i1; ++i) {
    const double K = (static_cast<double>(i) + 0.5) * cell;
    // Only cells within the annulus r1 < r < r2 can count.
    const double h_lo = std::sqrt(std::max(0.0, r1sq - K * K));
    const double h_hi = std::sqrt(std::max(0.0, r2sq - K * K));
    const auto j0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(h_lo / cell)) - 1);
    const auto j1 = static_cast<std::int64_t>(std::ceil(h_hi / cell)) + 1;
    for (std::int64_t j = j0; j <= j1; ++j) {
      const double H = (static_cast<double>(j) + 0.5) * cell;
      if (cap.contains(K, H) && strips.contains(K, H)) ++count;
    }
  }
  return static_cast<double>(count) * cell * cell;
}

int strip_count(const Cap& cap, const RescaledStripSet& strips) {
  const CapFrame f(cap);
  const auto [first, last] = strips.overlapping(f.k_min, f.k_max);
  const double floor_area = 1e-12 * strips.eps() * strips.eps();
  int count = 0;
  for (std::size_t s = first; s < last; ++s)
    if (measure_over(f, strips, s, s + 1) > floor_area) ++count;
  return count;
}

}  // namespace shellproj
