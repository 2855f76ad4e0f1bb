// Functions on the cylinder T x R stored as Fourier data on a (k, eta) lattice,
// and the transforms between that lattice and a uniform physical grid.
//
// A function is f(x, y) = sum_k sum_m fhat(k, eta_m) exp(2 pi i (k x + eta_m y)) * eta_step,
// i.e. the Fourier integral in eta replaced by a Riemann sum. Each k-line keeps
// its own contiguous run of eta samples, so corona-shaped supports cost memory
// proportional to their area rather than to their bounding box.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shellproj {

using Index = std::int64_t;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexGrid = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Smallest even 2^a 3^b 5^c that is >= n.
inline Index next_fast_size(Index n) {
  n = std::max<Index>(n, 2);
  for (Index m = n + (n & 1);; m += 2) {
    Index r = m;
    for (Index f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

namespace detail {

// exp(2 pi i t) with t reduced modulo 1 in extended precision.
template <typename Scalar>
std::complex<Scalar> unit_phase(long double t) {
  t -= std::floor(t);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * t;
  return {static_cast<Scalar>(std::cos(angle)), static_cast<Scalar>(std::sin(angle))};
}

inline std::mutex& fft_planner_mutex() {
  static std::mutex m;
  return m;
}

// (|z|^2)^(p/2), by repeated multiplication when p/2 is an integer.
inline double norm_pow(double norm_sq, double p) {
  const double half = p / 2;
  if (half == std::floor(half) && half <= 16) {
    double r = 1;
    for (int i = 0; i < static_cast<int>(half); ++i) r *= norm_sq;
    return r;
  }
  return std::pow(norm_sq, half);
}

inline Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Fixed-size 1D complex FFT with owned buffers. Buffers never move, so the
/// backend plan created at construction is reused by every transform.
template <typename Scalar>
class Fft {
 public:
  explicit Fft(Index n) : n_(n), in_(ComplexVector<Scalar>::Zero(n)), out_(n) {
    fft_.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    std::lock_guard<std::mutex> lock(detail::fft_planner_mutex());
    fft_.fwd(out_.data(), in_.data(), n_);
    fft_.inv(out_.data(), in_.data(), n_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  Index size() const { return n_; }
  ComplexVector<Scalar>& input() { return in_; }
  const ComplexVector<Scalar>& output() const { return out_; }

  /// out_k = sum_j in_j exp(-2 pi i j k / n)
  void forward() { fft_.fwd(out_.data(), in_.data(), n_); }
  /// out_j = sum_k in_k exp(+2 pi i j k / n), unscaled
  void inverse() { fft_.inv(out_.data(), in_.data(), n_); }

 private:
  Index n_;
  Eigen::FFT<Scalar> fft_;
  ComplexVector<Scalar> in_;
  ComplexVector<Scalar> out_;
};

/// Bluestein evaluation of out_b = sum_{a < A} in_a exp(2 pi i theta a b) for
/// b < B, for arbitrary real theta, in O((A + B) log(A + B)).
template <typename Scalar>
class ChirpZ {
 public:
  ChirpZ(Index input_length, Index output_length, Scalar theta)
      : a_(input_length),
        b_(output_length),
        fft_(next_fast_size(input_length + output_length - 1)) {
    const Index n = fft_.size();
    const Index chirp_len = std::max(a_, b_);
    chirp_.resize(chirp_len);
    for (Index i = 0; i < chirp_len; ++i) {
      const long double ii = static_cast<long double>(i);
      chirp_[i] = detail::unit_phase<Scalar>(0.5L * static_cast<long double>(theta) * ii * ii);
    }
    auto& v = fft_.input();
    v.setZero();
    for (Index i = 0; i < b_; ++i) v[i] = std::conj(chirp_[i]);
    for (Index i = 1; i < a_; ++i) v[n - i] = std::conj(chirp_[i]);
    fft_.forward();
    kernel_hat_ = fft_.output();
  }

  Index input_length() const { return a_; }
  Index output_length() const { return b_; }

  template <typename In, typename Out>
  void apply(const In& in, Out&& out) {
    const Index n = fft_.size();
    const Index len = in.size();
    auto& u = fft_.input();
    u.setZero();
    for (Index i = 0; i < len; ++i) u[i] = in[i] * chirp_[i];
    fft_.forward();
    u = fft_.output().cwiseProduct(kernel_hat_);
    fft_.inverse();
    const Scalar scale = Scalar(1) / static_cast<Scalar>(n);
    for (Index i = 0; i < b_; ++i) out[i] = fft_.output()[i] * chirp_[i] * scale;
  }

 private:
  Index a_;
  Index b_;
  Fft<Scalar> fft_;
  ComplexVector<Scalar> chirp_;
  ComplexVector<Scalar> kernel_hat_;
};

/// Run of eta samples on one k-line: eta = eta_step * (first + m), 0 <= m < length.
struct LineSpan {
  Index first = 0;
  Index length = 0;
  friend bool operator==(const LineSpan&, const LineSpan&) = default;
};

/// k-lines k_min, k_min + 1, ..., each carrying its own LineSpan of eta samples.
template <typename Scalar>
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  FrequencyGrid(Index k_min, Scalar eta_step, std::vector<LineSpan> lines)
      : k_min_(k_min), eta_step_(eta_step), lines_(std::move(lines)) {
    if (!(eta_step_ > 0)) throw PreconditionError("FrequencyGrid: eta_step must be positive");
    if (lines_.empty()) throw PreconditionError("FrequencyGrid: need at least one k-line");
    offsets_.resize(lines_.size() + 1, 0);
    for (std::size_t q = 0; q < lines_.size(); ++q) {
      if (lines_[q].length < 0) throw PreconditionError("FrequencyGrid: negative line length");
      offsets_[q + 1] = offsets_[q] + lines_[q].length;
      max_len_ = std::max(max_len_, lines_[q].length);
      if (lines_[q].length > 0) {
        eta_min_ = std::min(eta_min_, lines_[q].first);
        eta_max_ = std::max(eta_max_, lines_[q].first + lines_[q].length - 1);
      }
    }
    if (eta_min_ > eta_max_) eta_min_ = eta_max_ = 0;
  }

  /// Symmetric rectangle k in [k_min, k_max], eta in [-half_window, half_window].
  static FrequencyGrid rectangular(Index k_min, Index k_max, Scalar eta_step, Scalar eta_half_window) {
    if (k_min > k_max) throw PreconditionError("FrequencyGrid: k_min > k_max");
    if (!(eta_step > 0) || !(eta_half_window > 0))
      throw PreconditionError("FrequencyGrid: eta_step and eta_half_window must be positive");
    const Scalar ratio = eta_half_window / eta_step;
    const Index half = static_cast<Index>(std::llround(ratio));
    if (std::abs(ratio - static_cast<Scalar>(half)) > Scalar(1e-9) * std::max<Scalar>(1, ratio))
      throw PreconditionError("FrequencyGrid: eta_half_window must be an integer multiple of eta_step");
    std::vector<LineSpan> lines(static_cast<std::size_t>(k_max - k_min + 1), LineSpan{-half, 2 * half + 1});
    return FrequencyGrid(k_min, eta_step, std::move(lines));
  }

  Index k_min() const { return k_min_; }
  Index k_max() const { return k_min_ + num_lines() - 1; }
  Index num_lines() const { return static_cast<Index>(lines_.size()); }
  Index k(Index q) const { return k_min_ + q; }
  Scalar eta_step() const { return eta_step_; }
  const LineSpan& line(Index q) const { return lines_[static_cast<std::size_t>(q)]; }
  const std::vector<LineSpan>& lines() const { return lines_; }
  Index line_offset(Index q) const { return offsets_[static_cast<std::size_t>(q)]; }
  Index size() const { return offsets_.back(); }
  Index max_line_length() const { return max_len_; }
  /// Smallest / largest eta index over all non-empty lines.
  Index eta_index_min() const { return eta_min_; }
  Index eta_index_max() const { return eta_max_; }
  Scalar eta(Index q, Index m) const { return eta_step_ * static_cast<Scalar>(line(q).first + m); }

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
    return a.k_min_ == b.k_min_ && a.eta_step_ == b.eta_step_ && a.lines_ == b.lines_;
  }

 private:
  Index k_min_ = 0;
  Scalar eta_step_ = 1;
  std::vector<LineSpan> lines_;
  std::vector<Index> offsets_{0};
  Index max_len_ = 0;
  Index eta_min_ = std::numeric_limits<Index>::max();
  Index eta_max_ = std::numeric_limits<Index>::min();
};

template <typename Scalar>
class CylinderFunction {
 public:
  using Coefficients = ComplexVector<Scalar>;

  CylinderFunction() = default;
  explicit CylinderFunction(FrequencyGrid<Scalar> grid)
      : grid_(std::move(grid)), coeffs_(Coefficients::Zero(grid_.size())) {}
  CylinderFunction(FrequencyGrid<Scalar> grid, Coefficients coeffs)
      : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size())
      throw PreconditionError("CylinderFunction: coefficient count does not match grid");
    if (!coeffs_.allFinite()) throw PreconditionError("CylinderFunction: coefficients must be finite");
  }

  const FrequencyGrid<Scalar>& grid() const { return grid_; }
  const Coefficients& coeffs() const { return coeffs_; }
  Coefficients& coeffs() { return coeffs_; }

  auto line(Index q) { return coeffs_.segment(grid_.line_offset(q), grid_.line(q).length); }
  auto line(Index q) const { return coeffs_.segment(grid_.line_offset(q), grid_.line(q).length); }
  std::complex<Scalar>& at(Index q, Index m) { return coeffs_[grid_.line_offset(q) + m]; }
  const std::complex<Scalar>& at(Index q, Index m) const { return coeffs_[grid_.line_offset(q) + m]; }

  CylinderFunction& operator+=(const CylinderFunction& other) {
    require_same_grid(other);
    coeffs_ += other.coeffs_;
    return *this;
  }
  CylinderFunction& operator-=(const CylinderFunction& other) {
    require_same_grid(other);
    coeffs_ -= other.coeffs_;
    return *this;
  }
  CylinderFunction& operator*=(std::complex<Scalar> s) {
    coeffs_ *= s;
    return *this;
  }
  friend CylinderFunction operator+(CylinderFunction a, const CylinderFunction& b) { return a += b; }
  friend CylinderFunction operator-(CylinderFunction a, const CylinderFunction& b) { return a -= b; }
  friend CylinderFunction operator*(std::complex<Scalar> s, CylinderFunction a) { return a *= s; }

 private:
  void require_same_grid(const CylinderFunction& other) const {
    if (!(grid_ == other.grid_)) throw PreconditionError("CylinderFunction: grids differ");
  }

  FrequencyGrid<Scalar> grid_;
  Coefficients coeffs_;
};

/// x_j = j / n_x on [0, 1); y_l = -y_half_window + l * dy with dy = 2 y_half_window / n_y.
template <typename Scalar>
struct PhysicalGrid {
  Index n_x = 0;
  Scalar y_half_window = 0;
  Index n_y = 0;

  Scalar dy() const { return Scalar(2) * y_half_window / static_cast<Scalar>(n_y); }
  Scalar x(Index j) const { return static_cast<Scalar>(j) / static_cast<Scalar>(n_x); }
  Scalar y(Index l) const { return -y_half_window + static_cast<Scalar>(l) * dy(); }
  /// Rectangle-rule weight of one sample.
  Scalar cell_weight() const { return dy() / static_cast<Scalar>(n_x); }
};

/// Throws PreconditionError naming the axis that is under-resolved. The x-axis
/// needs n_x > k_max - k_min; the y-axis needs 1/dy above the eta extent of
/// every single k-line (inter-line eta offsets are applied analytically).
template <typename Scalar>
void check_nyquist(const FrequencyGrid<Scalar>& grid, const PhysicalGrid<Scalar>& pg) {
  if (pg.n_x <= 0 || pg.n_y <= 0 || !(pg.y_half_window > 0))
    throw PreconditionError("physical grid is empty");
  if (pg.n_x <= grid.k_max() - grid.k_min())
    throw PreconditionError("Nyquist violation on x axis: n_x = " + std::to_string(pg.n_x) +
                            " must exceed the k span " + std::to_string(grid.k_max() - grid.k_min()));
  const Scalar line_band = grid.eta_step() * static_cast<Scalar>(std::max<Index>(grid.max_line_length() - 1, 0));
  if (!(Scalar(1) / pg.dy() > line_band))
    throw PreconditionError("Nyquist violation on y axis: sampling rate " + std::to_string(1.0 / pg.dy()) +
                            " must exceed the per-line eta extent " + std::to_string(line_band));
}

/// Synthesis operator S (coefficients -> samples on a physical grid) and its
/// adjoint, with the FFT and chirp plans kept for repeated use on one grid.
template <typename Scalar>
class Synthesizer {
 public:
  Synthesizer(FrequencyGrid<Scalar> grid, PhysicalGrid<Scalar> pg)
      : grid_(std::move(grid)), pg_(pg), fft_x_(pg.n_x) {
    check_nyquist(grid_, pg_);
    const Scalar h = grid_.eta_step();
    const Scalar theta = h * pg_.dy();
    const long double y0 = static_cast<long double>(pg_.y(0));
    start_phase_.resize(std::max<Index>(grid_.max_line_length(), 1));
    for (Index m = 0; m < start_phase_.size(); ++m)
      start_phase_[m] = detail::unit_phase<Scalar>(static_cast<long double>(h) * m * y0);
    x_carrier_.resize(pg_.n_x);
    const Index kmod = ((grid_.k_min() % pg_.n_x) + pg_.n_x) % pg_.n_x;
    for (Index j = 0; j < pg_.n_x; ++j)
      x_carrier_[j] = detail::unit_phase<Scalar>(static_cast<long double>((kmod * j) % pg_.n_x) / pg_.n_x);
    for (const auto& span : grid_.lines()) {
      const Index bucket = detail::next_pow2(std::max<Index>(span.length, 1));
      if (span.length > 0 && !forward_.contains(bucket)) {
        forward_.emplace(std::piecewise_construct, std::forward_as_tuple(bucket),
                         std::forward_as_tuple(bucket, pg_.n_y, theta));
        adjoint_.emplace(std::piecewise_construct, std::forward_as_tuple(bucket),
                         std::forward_as_tuple(pg_.n_y, bucket, -theta));
      }
    }
  }

  const FrequencyGrid<Scalar>& grid() const { return grid_; }
  const PhysicalGrid<Scalar>& physical_grid() const { return pg_; }

  /// Samples as an n_x by n_y matrix (column l holds every x at y_l).
  ComplexGrid<Scalar> synthesize(const CylinderFunction<Scalar>& f) {
    if (!(f.grid() == grid_)) throw PreconditionError("Synthesizer: function grid differs from plan grid");
    const Index nl = grid_.num_lines();
    const Index ny = pg_.n_y;
    const Scalar h = grid_.eta_step();
    ComplexGrid<Scalar> profiles = ComplexGrid<Scalar>::Zero(nl, ny);
    ComplexVector<Scalar> z, out(ny), carrier(ny);
    for (Index q = 0; q < nl; ++q) {
      const Index len = grid_.line(q).length;
      if (len == 0) continue;
      z = f.line(q).cwiseProduct(start_phase_.head(len));
      forward_.at(detail::next_pow2(len)).apply(z, out);
      line_carrier(q, carrier);
      profiles.row(q) = (out.cwiseProduct(carrier) * h).transpose();
    }
    ComplexGrid<Scalar> samples(pg_.n_x, ny);
    auto& in = fft_x_.input();
    for (Index l = 0; l < ny; ++l) {
      in.setZero();
      for (Index q = 0; q < nl; ++q) in[q % pg_.n_x] += profiles(q, l);
      fft_x_.inverse();
      samples.col(l) = fft_x_.output().cwiseProduct(x_carrier_);
    }
    return samples;
  }

  /// S^H applied to an n_x by n_y array; returns packed coefficients.
  ComplexVector<Scalar> adjoint(const ComplexGrid<Scalar>& values) {
    if (values.rows() != pg_.n_x || values.cols() != pg_.n_y)
      throw PreconditionError("Synthesizer::adjoint: array shape does not match physical grid");
    const Index nl = grid_.num_lines();
    const Index ny = pg_.n_y;
    const Scalar h = grid_.eta_step();
    ComplexGrid<Scalar> pulled(nl, ny);
    auto& in = fft_x_.input();
    for (Index l = 0; l < ny; ++l) {
      in = values.col(l).cwiseProduct(x_carrier_.conjugate());
      fft_x_.forward();
      for (Index q = 0; q < nl; ++q) pulled(q, l) = fft_x_.output()[q % pg_.n_x];
    }
    ComplexVector<Scalar> result = ComplexVector<Scalar>::Zero(grid_.size());
    ComplexVector<Scalar> r(ny), carrier(ny), out;
    for (Index q = 0; q < nl; ++q) {
      const Index len = grid_.line(q).length;
      if (len == 0) continue;
      line_carrier(q, carrier);
      r = pulled.row(q).transpose().cwiseProduct(carrier.conjugate());
      auto& plan = adjoint_.at(detail::next_pow2(len));
      out.resize(plan.output_length());
      plan.apply(r, out);
      result.segment(grid_.line_offset(q), len) =
          out.head(len).cwiseProduct(start_phase_.head(len).conjugate()) * h;
    }
    return result;
  }

 private:
  // exp(2 pi i eta_first y_l), resynchronised exactly every 256 samples.
  void line_carrier(Index q, ComplexVector<Scalar>& carrier) const {
    const long double eta0 = static_cast<long double>(grid_.eta_step()) * grid_.line(q).first;
    const long double y0 = static_cast<long double>(pg_.y(0));
    const long double dy = static_cast<long double>(pg_.dy());
    const std::complex<Scalar> step = detail::unit_phase<Scalar>(eta0 * dy);
    std::complex<Scalar> c;
    for (Index l = 0; l < carrier.size(); ++l) {
      if (l % 256 == 0) {
        c = detail::unit_phase<Scalar>(std::fmod(eta0 * y0, 1.0L) + std::fmod(eta0 * dy * l, 1.0L));
      }
      carrier[l] = c;
      c *= step;
    }
  }

  FrequencyGrid<Scalar> grid_;
  PhysicalGrid<Scalar> pg_;
  Fft<Scalar> fft_x_;
  ComplexVector<Scalar> start_phase_;
  ComplexVector<Scalar> x_carrier_;
  std::map<Index, ChirpZ<Scalar>> forward_;
  std::map<Index, ChirpZ<Scalar>> adjoint_;
};

template <typename Scalar>
ComplexGrid<Scalar> synthesize(const CylinderFunction<Scalar>& f, const PhysicalGrid<Scalar>& pg) {
  Synthesizer<Scalar> s(f.grid(), pg);
  return s.synthesize(f);
}

/// Direct summation at one point; O(number of coefficients).
template <typename Scalar>
std::complex<Scalar> evaluate_point(const CylinderFunction<Scalar>& f, Scalar x, Scalar y) {
  const auto& g = f.grid();
  const long double h = g.eta_step();
  std::complex<Scalar> total = 0;
  const std::complex<Scalar> step = detail::unit_phase<Scalar>(h * y);
  for (Index q = 0; q < g.num_lines(); ++q) {
    const auto& span = g.line(q);
    if (span.length == 0) continue;
    std::complex<Scalar> line_sum = 0;
    std::complex<Scalar> w = 1;
    for (Index m = 0; m < span.length; ++m) {
      if (m % 256 == 0) w = detail::unit_phase<Scalar>(std::fmod(h * m * static_cast<long double>(y), 1.0L));
      line_sum += f.at(q, m) * w;
      w *= step;
    }
    const long double phase = std::fmod(static_cast<long double>(g.k(q)) * x, 1.0L) +
                              std::fmod(h * span.first * static_cast<long double>(y), 1.0L);
    total += line_sum * detail::unit_phase<Scalar>(phase);
  }
  return total * static_cast<Scalar>(h);
}

/// ||f||_p by rectangle rule together with the same rule on every other
/// sample in both directions (the half-resolution echo).
struct LpNorm {
  double value = 0;
  double half_resolution = 0;
};

template <typename Scalar>
LpNorm lp_norm(const ComplexGrid<Scalar>& samples, const PhysicalGrid<Scalar>& pg, double p) {
  if (samples.size() == 0 || pg.n_x <= 0 || pg.n_y <= 0) throw PreconditionError("lp_norm: empty grid");
  if (samples.rows() != pg.n_x || samples.cols() != pg.n_y)
    throw PreconditionError("lp_norm: sample array does not match physical grid");
  if (!(p >= 2)) throw PreconditionError("lp_norm: p must be >= 2");
  double peak_sq = 0, half_peak_sq = 0;
  for (Index l = 0; l < pg.n_y; ++l)
    for (Index j = 0; j < pg.n_x; ++j) {
      const double a = std::norm(std::complex<double>(samples(j, l)));
      peak_sq = std::max(peak_sq, a);
      if ((j % 2 == 0) && (l % 2 == 0)) half_peak_sq = std::max(half_peak_sq, a);
    }
  const double peak = std::sqrt(peak_sq);
  if (std::isinf(p)) return {peak, std::sqrt(half_peak_sq)};
  if (peak == 0) return {0.0, 0.0};
  // Scaled by the peak so large p cannot overflow.
  const double inv = 1 / peak_sq;
  long double full = 0, half = 0;
  for (Index l = 0; l < pg.n_y; ++l) {
    double column = 0, column_half = 0;
    for (Index j = 0; j < pg.n_x; ++j) {
      const double t = detail::norm_pow(std::norm(std::complex<double>(samples(j, l))) * inv, p);
      column += t;
      if (j % 2 == 0) column_half += t;
    }
    full += column;
    if (l % 2 == 0) half += column_half;
  }
  const long double w = pg.cell_weight();
  return {static_cast<double>(peak * std::pow(w * full, 1.0L / p)),
          static_cast<double>(peak * std::pow(4 * w * half, 1.0L / p))};
}

template <typename Scalar>
Scalar l2_norm_frequency(const CylinderFunction<Scalar>& f) {
  return std::sqrt(f.coeffs().squaredNorm() * f.grid().eta_step());
}

/// Drives the choice of physical grid for norm evaluation.
struct ResolutionPolicy {
  /// Upper bound on n_x * n_y.
  Index sample_budget = Index{1} << 22;
  /// Scales the y-window when the full period does not fit the budget.
  double y_window_multiplier = 1.0;
  /// Rescale a windowed L^p integral (finite p) by period / window. Valid for
  /// data whose |f|^p is statistically stationary in y, such as i.i.d. coefficients.
  bool stationary_extrapolation = false;
};

/// Oversampling per unit of bandwidth: p for finite p (so the half-resolution
/// echo still integrates |f|^p exactly when it is band-limited), 4 for p = inf.
inline double oversampling_for(double p) { return std::isinf(p) ? 4.0 : std::max(2.0, p); }

/// The full y-period 1/eta_step when it fits the sample budget, otherwise the
/// widest centred y-window that does, sampled at the same density.
template <typename Scalar>
PhysicalGrid<Scalar> resolve_physical_grid(const FrequencyGrid<Scalar>& grid, double p, const ResolutionPolicy& policy) {
  const double s = oversampling_for(p);
  const Index x_span = grid.num_lines() - 1;
  const Index n_x = next_fast_size(static_cast<Index>(std::ceil(s * static_cast<double>(x_span))) + 2);
  const Index span_total = grid.eta_index_max() - grid.eta_index_min();
  const Index span_line = std::max<Index>(grid.max_line_length() - 1, 0);
  const Index span = (p == 2) ? span_line : span_total;
  const Index n_y_full = next_fast_size(static_cast<Index>(std::ceil(s * static_cast<double>(span))) + 2);
  const Scalar h = grid.eta_step();
  if (n_x * n_y_full <= policy.sample_budget) return {n_x, Scalar(0.5) / h, n_y_full};
  const Scalar dy = Scalar(1) / (h * static_cast<Scalar>(n_y_full));
  Index n_y = (policy.sample_budget / n_x) / 2 * 2;
  n_y = std::max<Index>(4, static_cast<Index>(std::llround(static_cast<double>(n_y) * policy.y_window_multiplier)) / 2 * 2);
  return {n_x, std::min(Scalar(0.5) * dy * static_cast<Scalar>(n_y), Scalar(0.5) / h), n_y};
}

using FrequencyGridd = FrequencyGrid<double>;
using CylinderFunctiond = CylinderFunction<double>;
using PhysicalGridd = PhysicalGrid<double>;

}  // namespace shellproj
