#include <doctest.h>

#include "shellproj/examples.hpp"
#include "shellproj/fourier.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace shellproj;
using cd = std::complex<double>;

namespace {

CylinderFunctiond random_rect(std::mt19937_64& rng, Index k_min = -3, Index k_max = 4, double h = 0.25, double w = 2) {
  std::normal_distribution<double> n;
  CylinderFunctiond f(FrequencyGridd::rectangular(k_min, k_max, h, w));
  for (Index i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = {n(rng), n(rng)};
  return f;
}

// Direct O(N^2) sum, independent of the chirp-z path.
cd direct_value(const CylinderFunctiond& f, double x, double y) {
  const auto& g = f.grid();
  cd total = 0;
  for (Index q = 0; q < g.num_lines(); ++q)
    for (Index m = 0; m < g.line(q).length; ++m) {
      const double ph = 2 * std::numbers::pi * (static_cast<double>(g.k(q)) * x + g.eta(q, m) * y);
      total += f.at(q, m) * cd(std::cos(ph), std::sin(ph));
    }
  return total * g.eta_step();
}

double max_abs(const ComplexGrid<double>& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("next_fast_size returns even 5-smooth sizes") {
  CHECK(next_fast_size(1) == 2);
  CHECK(next_fast_size(7) == 8);
  CHECK(next_fast_size(11) == 12);
  CHECK(next_fast_size(31) == 32);
  CHECK(next_fast_size(97) == 100);
  for (Index n = 1; n < 500; ++n) {
    const Index m = next_fast_size(n);
    CHECK(m >= n);
    CHECK(m % 2 == 0);
  }
}

TEST_CASE("chirp-z matches the direct sum for arbitrary theta") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto [a, b] : {std::pair<Index, Index>{1, 1}, {5, 7}, {16, 40}, {33, 9}}) {
    const double theta = 0.37 * u(rng);
    ChirpZ<double> plan(a, b, theta);
    ComplexVector<double> in(a), out(b);
    for (Index i = 0; i < a; ++i) in[i] = {u(rng), u(rng)};
    plan.apply(in, out);
    for (Index j = 0; j < b; ++j) {
      cd ref = 0;
      for (Index i = 0; i < a; ++i) ref += in[i] * std::polar(1.0, 2 * std::numbers::pi * theta * i * j);
      CHECK(std::abs(out[j] - ref) < 1e-12 * (1 + std::abs(ref)) * a);
    }
  }
}

TEST_CASE("single mode at the origin synthesizes to the constant eta_step") {
  CylinderFunctiond f(FrequencyGridd::rectangular(-2, 2, 0.5, 3));
  f.at(2, 6) = 1;  // k = 0, eta = 0
  const PhysicalGridd pg{8, 1.0, 32};
  const auto s = synthesize(f, pg);
  for (Index i = 0; i < s.size(); ++i) CHECK(std::abs(s.data()[i] - cd(0.5)) < 1e-14);
}

TEST_CASE("pure x-mode k = 3 has constant modulus and the right phase") {
  CylinderFunctiond f(FrequencyGridd::rectangular(0, 3, 0.25, 1));
  f.at(3, 4) = 1;
  const PhysicalGridd pg{8, 2.0, 16};
  const auto s = synthesize(f, pg);
  for (Index l = 0; l < pg.n_y; ++l)
    for (Index j = 0; j < pg.n_x; ++j) {
      const cd expect = 0.25 * std::polar(1.0, 2 * std::numbers::pi * 3 * pg.x(j));
      CHECK(std::abs(s(j, l) - expect) < 1e-14);
    }
}

TEST_CASE("synthesis agrees with direct summation on ragged grids") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  FrequencyGridd grid(5, 0.1, {{-30, 11}, {}, {4, 1}, {100, 23}, {-7, 40}});
  CylinderFunctiond f(grid);
  for (Index i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = {n(rng), n(rng)};
  const PhysicalGridd pg{10, 3.7, 90};
  const auto s = synthesize(f, pg);
  std::uniform_int_distribution<Index> jx(0, pg.n_x - 1), ly(0, pg.n_y - 1);
  for (int t = 0; t < 40; ++t) {
    const Index j = jx(rng), l = ly(rng);
    const cd ref = direct_value(f, pg.x(j), pg.y(l));
    CHECK(std::abs(s(j, l) - ref) < 1e-11 * (1 + std::abs(ref)));
    CHECK(std::abs(evaluate_point(f, pg.x(j), pg.y(l)) - ref) < 1e-11 * (1 + std::abs(ref)));
  }
}

TEST_CASE("knapp example samples match direct summation of the Fourier sum") {
  const SpectralParams sp{64, 0.25, 4};
  const auto g = build_knapp(sp);
  const auto pg = resolve_physical_grid(g.grid(), 4.0, ResolutionPolicy{});
  const auto s = synthesize(g, pg);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Index> jx(0, pg.n_x - 1), ly(0, pg.n_y - 1);
  for (int t = 0; t < 20; ++t) {
    const Index j = jx(rng), l = ly(rng);
    const cd ref = direct_value(g, pg.x(j), pg.y(l));
    CHECK(std::abs(s(j, l) - ref) <= 1e-6 * std::abs(ref) + 1e-12);
  }
}

TEST_CASE("Nyquist violations name the axis") {
  CylinderFunctiond f(FrequencyGridd::rectangular(0, 9, 0.5, 4));
  CHECK_THROWS_WITH_AS(synthesize(f, PhysicalGridd{9, 1.0, 64}), doctest::Contains("x axis"), PreconditionError);
  // 1/dy must exceed the per-line eta extent 8.
  CHECK_THROWS_WITH_AS(synthesize(f, PhysicalGridd{16, 1.0, 8}), doctest::Contains("y axis"), PreconditionError);
  CHECK_NOTHROW(synthesize(f, PhysicalGridd{16, 1.0, 20}));
}

TEST_CASE("adjoint synthesis satisfies <Sc, G> = <c, S^H G>") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  FrequencyGridd grid(-2, 0.3, {{1, 6}, {-4, 9}, {}, {10, 3}});
  CylinderFunctiond f(grid);
  for (Index i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = {n(rng), n(rng)};
  const PhysicalGridd pg{6, 2.5, 30};
  Synthesizer<double> s(grid, pg);
  ComplexGrid<double> G(pg.n_x, pg.n_y);
  for (Index i = 0; i < G.size(); ++i) G.data()[i] = {n(rng), n(rng)};
  const cd lhs = (s.synthesize(f).conjugate().cwiseProduct(G)).sum();
  const cd rhs = f.coeffs().dot(s.adjoint(G));
  CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
}

TEST_CASE("lp_norm of the constant 1 on y in [-1, 1] is 2^(1/p)") {
  const PhysicalGridd pg{8, 1.0, 16};
  const ComplexGrid<double> ones = ComplexGrid<double>::Ones(8, 16);
  for (double p : {2.0, 3.0, 4.0, 7.5}) {
    const auto n = lp_norm(ones, pg, p);
    CHECK(n.value == doctest::Approx(std::pow(2.0, 1 / p)).epsilon(1e-14));
    CHECK(n.half_resolution == doctest::Approx(std::pow(2.0, 1 / p)).epsilon(1e-14));
  }
  CHECK(lp_norm(ones, pg, kInfinity).value == 1.0);
  CHECK_THROWS_AS(lp_norm(ComplexGrid<double>(0, 0), PhysicalGridd{0, 1.0, 0}, 2.0), PreconditionError);
  CHECK_THROWS_AS(lp_norm(ones, pg, 1.5), PreconditionError);
}

TEST_CASE("modulation k -> k + 1 leaves every L^p norm unchanged") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_rect(rng);
    const CylinderFunctiond g(FrequencyGridd(f.grid().k_min() + 1, f.grid().eta_step(), f.grid().lines()), f.coeffs());
    for (double p : {2.0, 3.0, 4.0, 6.0, kInfinity}) {
      const auto pg = resolve_physical_grid(f.grid(), p, ResolutionPolicy{});
      const double a = lp_norm(synthesize(f, pg), pg, p).value;
      const double b = lp_norm(synthesize(g, pg), pg, p).value;
      CHECK(std::abs(a - b) < 1e-9 * a);
    }
  }
}

TEST_CASE("l2_norm_frequency on unit coefficients") {
  CylinderFunctiond f(FrequencyGridd::rectangular(0, 3, 0.04, 0.2));
  f.at(1, 2) = 1;
  CHECK(l2_norm_frequency(f) == doctest::Approx(0.2).epsilon(1e-15));
  f.at(3, 7) = cd(0, 1);
  CHECK(l2_norm_frequency(f) == doctest::Approx(std::sqrt(2.0) * 0.2).epsilon(1e-15));
}

TEST_CASE("Plancherel: frequency and physical L^2 norms agree") {
  std::mt19937_64 rng(1);
  std::vector<CylinderFunctiond> fs;
  for (int t = 0; t < 5; ++t) fs.push_back(random_rect(rng));
  fs.push_back(build_annulus({50, 0.1, 2}));
  fs.push_back(build_knapp({64, 0.25, 2}));
  fs.push_back(build_random_corona({40, 0.2, 2}, 3));
  for (const auto& f : fs) {
    const auto pg = resolve_physical_grid(f.grid(), 2.0, ResolutionPolicy{});
    const auto n = lp_norm(synthesize(f, pg), pg, 2.0);
    const double l2 = l2_norm_frequency(f);
    CHECK(std::abs(n.value - l2) / l2 < 1e-6);
    CHECK(std::abs(n.half_resolution - l2) / l2 < 1e-6);
  }
}

TEST_CASE("annulus L^2 agrees across two resolutions") {
  const auto h = build_annulus({50, 0.1, 2});
  const double l2 = l2_norm_frequency(h);
  auto pg = resolve_physical_grid(h.grid(), 2.0, ResolutionPolicy{});
  const double coarse = lp_norm(synthesize(h, pg), pg, 2.0).value;
  pg.n_x *= 2;
  pg.n_y *= 2;
  const double fine = lp_norm(synthesize(h, pg), pg, 2.0).value;
  CHECK(std::abs(coarse - l2) / l2 < 1e-6);
  CHECK(std::abs(fine - l2) / l2 < 1e-6);
}

TEST_CASE("linearity of synthesis on random pairs") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n;
  const PhysicalGridd pg{16, 2.0, 40};
  for (int t = 0; t < 100; ++t) {
    const auto f = random_rect(rng), g = random_rect(rng);
    const cd a(n(rng), n(rng)), b(n(rng), n(rng));
    const auto lhs = synthesize(a * f + b * g, pg);
    const ComplexGrid<double> rhs = a * synthesize(f, pg) + b * synthesize(g, pg);
    CHECK(max_abs(lhs - rhs) < 1e-12 * (1 + max_abs(rhs)));
  }
}

TEST_CASE("Gaussian wave packet: L^4 / L^2 matches the closed form") {
  // Untruncated Gaussian profile gives exactly (lambda delta)^(1/8); a
  // truncation radius of 1.4 leaves a tail below 1e-5.
  for (double lambda : {64.0, 400.0}) {
    const SpectralParams sp{lambda, 0.25, 4};
    const auto g = build_knapp(sp, Cutoff::truncated_gaussian(1.4));
    const auto r = evaluate_ratio(g, sp);
    CHECK(std::abs(r.ratio / std::pow(lambda * 0.25, 0.125) - 1) < 0.005);
    CHECK(std::abs(r.resolution_echo - r.ratio) < 1e-9 * r.ratio);
  }
}

TEST_CASE("resolved grids are exact for |f|^p and satisfy Nyquist") {
  const auto h = build_annulus({40, 0.2, 4});
  for (double p : {2.0, 4.0, 6.0, kInfinity}) {
    const auto pg = resolve_physical_grid(h.grid(), p, ResolutionPolicy{});
    CHECK_NOTHROW(check_nyquist(h.grid(), pg));
    CHECK(pg.n_x % 2 == 0);
    CHECK(pg.n_y % 2 == 0);
  }
  ResolutionPolicy small;
  small.sample_budget = 4096;
  const auto pg = resolve_physical_grid(h.grid(), 4.0, small);
  CHECK(pg.n_x * pg.n_y <= 4096);
  CHECK(pg.y_half_window < 0.5 / h.grid().eta_step());
  CHECK_NOTHROW(check_nyquist(h.grid(), pg));
}

TEST_CASE("single precision instantiation") {
  CylinderFunction<float> f(FrequencyGrid<float>::rectangular(0, 2, 0.5f, 1.0f));
  f.at(1, 2) = 1;
  const auto s = synthesize(f, PhysicalGrid<float>{4, 1.0f, 8});
  for (Index j = 0; j < 4; ++j) {
    const std::complex<float> expect = 0.5f * std::polar(1.0f, 2 * std::numbers::pi_v<float> * j / 4.0f);
    CHECK(std::abs(s(j, 3) - expect) < 1e-6f);
  }
}

TEST_CASE("grid and function invariants are enforced") {
  CHECK_THROWS_AS(FrequencyGridd::rectangular(3, 2, 0.1, 1), PreconditionError);
  CHECK_THROWS_AS(FrequencyGridd::rectangular(0, 2, 0.3, 1), PreconditionError);
  CHECK_THROWS_AS(FrequencyGridd::rectangular(0, 2, -0.1, 1), PreconditionError);
  const auto g = FrequencyGridd::rectangular(0, 2, 0.25, 1);
  CHECK(g.line(0).length == 9);
  ComplexVector<double> bad = ComplexVector<double>::Zero(g.size());
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(CylinderFunctiond(g, bad), PreconditionError);
  CHECK_THROWS_AS(CylinderFunctiond(g, ComplexVector<double>::Zero(3)), PreconditionError);
}
