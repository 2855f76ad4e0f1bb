#include <doctest.h>

#include "shellproj/examples.hpp"
#include "shellproj/projector.hpp"

#include <cmath>
#include <random>

using namespace shellproj;
using cd = std::complex<double>;

namespace {

// Random data on a rectangle reaching past lambda + delta on both axes.
CylinderFunctiond random_box(std::mt19937_64& rng, double lambda, double h) {
  std::normal_distribution<double> n;
  const double reach = std::ceil((lambda + 1) / h) * h;
  CylinderFunctiond f(FrequencyGridd::rectangular(-static_cast<Index>(lambda) - 1, static_cast<Index>(lambda) + 1, h, reach));
  for (Index i = 0; i < f.coeffs().size(); ++i) f.coeffs()[i] = {n(rng), n(rng)};
  return f;
}

// Keeps only first-quadrant corona points.
CylinderFunctiond first_quadrant_corona(const CylinderFunctiond& f, const SpectralParams& sp) {
  CylinderFunctiond g = f;
  const auto& grid = g.grid();
  for (Index q = 0; q < grid.num_lines(); ++q)
    for (Index m = 0; m < grid.line(q).length; ++m)
      if (grid.k(q) < 0 || grid.eta(q, m) < 0 || !in_open_corona(grid.k(q), grid.eta(q, m), sp.lambda, sp.delta))
        g.at(q, m) = 0;
  return g;
}

}  // namespace

TEST_CASE("cutoff shapes") {
  const auto ind = Cutoff::indicator();
  CHECK(ind(0) == 1);
  CHECK(ind(0.999) == 1);
  CHECK(ind(1) == 0);
  CHECK(ind(-1.2) == 0);
  const auto bump = Cutoff::smooth_bump();
  CHECK(bump(0) == 1);
  CHECK(bump(0.5) == doctest::Approx(std::exp(1 - 1 / 0.75)));
  CHECK(bump(1) == 0);
  const auto tg = Cutoff::truncated_gaussian();
  CHECK(tg(0.25) == doctest::Approx(std::exp(-std::numbers::pi / 16)));
  CHECK(tg(0.5) == 0);
  for (const auto& c : {ind, bump, tg, Cutoff::smooth_bump(2.5)})
    for (double t = -3; t <= 3; t += 0.01) {
      CHECK(c(t) >= 0);
      CHECK(c(t) <= 1);
      CHECK(c(t) == c(-t));
      if (std::abs(t) > c.support_radius) CHECK(c(t) == 0);
    }
}

TEST_CASE("spectral parameters follow the hypotheses") {
  CHECK_THROWS_AS((SpectralParams{1.0, 0.5, 2}).validate(), PreconditionError);
  CHECK_THROWS_AS((SpectralParams{10, 1.0, 2}).validate(), PreconditionError);
  CHECK_THROWS_AS((SpectralParams{10, 0.5, 1.5}).validate(), PreconditionError);
  CHECK_NOTHROW((SpectralParams{10, 0.5, kInfinity}).validate());
}

TEST_CASE("projector annihilates data outside the corona and fixes data inside") {
  const SpectralParams sp{6, 0.5, 2};
  std::mt19937_64 rng(2);
  const auto f = random_box(rng, sp.lambda, 0.05);
  CylinderFunctiond outside = f, inside = f;
  const auto& g = f.grid();
  for (Index q = 0; q < g.num_lines(); ++q)
    for (Index m = 0; m < g.line(q).length; ++m) {
      const double r = std::hypot(static_cast<double>(g.k(q)), g.eta(q, m));
      if (r > sp.lambda - sp.delta && r < sp.lambda + sp.delta) outside.at(q, m) = 0;
      if (!(std::abs(r - sp.lambda) < sp.delta / 2)) inside.at(q, m) = 0;
    }
  const auto ind = Cutoff::indicator();
  CHECK(project(outside, sp, ind).coeffs().norm() == 0);
  CHECK((project(inside, sp, ind).coeffs() - inside.coeffs()).norm() == 0);
}

TEST_CASE("coverage precondition reports the required extents") {
  const SpectralParams sp{6, 0.5, 2};
  CylinderFunctiond small(FrequencyGridd::rectangular(0, 5, 0.1, 7));
  CHECK_THROWS_WITH_AS(project(small, sp, Cutoff::indicator()), doctest::Contains("6.5"), PreconditionError);
}

TEST_CASE("indicator projector: idempotent, L2-contractive, split-consistent") {
  const SpectralParams sp{7, 0.6, 2};
  const auto ind = Cutoff::indicator();
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto f = random_box(rng, sp.lambda, 0.1);
    const auto pf = project(f, sp, ind);
    CHECK(l2_norm_frequency(pf) <= l2_norm_frequency(f));
    if (t < 50) {
      CHECK((project(pf, sp, ind).coeffs() - pf.coeffs()).norm() == 0);
      const auto pq = first_quadrant_corona(pf, sp);
      const auto [lo, hi] = split_low_high(pq, sp);
      CHECK(((lo + hi).coeffs() - pq.coeffs()).norm() == 0);
    }
  }
}

TEST_CASE("smooth cutoff applied twice equals chi^2 as one multiplier") {
  const SpectralParams sp{5, 0.7, 2};
  const auto bump = Cutoff::smooth_bump();
  std::mt19937_64 rng(8);
  const auto f = random_box(rng, sp.lambda, 0.1);
  const auto twice = project(project(f, sp, bump), sp, bump);
  const auto& g = f.grid();
  for (Index q = 0; q < g.num_lines(); ++q)
    for (Index m = 0; m < g.line(q).length; ++m) {
      const double t = (std::hypot(static_cast<double>(g.k(q)), g.eta(q, m)) - sp.lambda) / sp.delta;
      const cd expect = f.at(q, m) * bump(t) * bump(t);
      CHECK(std::abs(twice.at(q, m) - expect) <= 1e-12 * std::abs(f.at(q, m)));
    }
}

TEST_CASE("split assigns k-lines by |k - lambda| <= 1/delta") {
  const SpectralParams sp{100, 0.5, 2};
  CHECK(is_low_line(99, sp.lambda, sp.delta));
  CHECK(is_low_line(98, sp.lambda, sp.delta));
  CHECK_FALSE(is_low_line(97, sp.lambda, sp.delta));
  CHECK_FALSE(is_low_line(90, sp.lambda, sp.delta));

  // Half annulus on k <= lambda/2 lies entirely in the high part; the full corona splits.
  const auto r = build_random_corona(sp, 5);
  const auto [lo, hi] = split_low_high(r, sp);
  const auto& g = r.grid();
  for (Index q = 0; q < g.num_lines(); ++q) {
    const bool low = std::abs(static_cast<double>(g.k(q)) - 100) <= 2;
    CHECK((low ? hi : lo).line(q).norm() == 0);
    CHECK(((low ? lo : hi).line(q) - r.line(q)).norm() == 0);
  }
  const double a = l2_norm_frequency(r), b = l2_norm_frequency(lo), c = l2_norm_frequency(hi);
  CHECK(std::abs(a * a - (b * b + c * c)) <= 1e-12 * a * a);
}

TEST_CASE("split rejects data outside the first-quadrant corona") {
  const SpectralParams sp{10, 0.5, 2};
  CylinderFunctiond f(FrequencyGridd(10, 0.1, {{-3, 7}}));
  f.at(0, 0) = 1;  // eta = -0.3 < 0
  CHECK_THROWS_AS(split_low_high(f, sp), PreconditionError);
  CylinderFunctiond g(FrequencyGridd(3, 0.1, {{0, 5}}));
  g.at(0, 2) = 1;  // radius 3, far from the corona
  CHECK_THROWS_AS(split_low_high(g, sp), PreconditionError);
}

TEST_CASE("theoretical bound values and regimes") {
  for (double lambda : {3.0, 100.0, 1e4})
    for (double delta : {0.01, 0.3, 0.9}) {
      const auto b = theoretical_bound({lambda, delta, 2});
      CHECK(b.value == doctest::Approx(std::sqrt(delta / lambda) + 1).epsilon(1e-14));
      CHECK(b.regime == Regime::high);
      const auto bi = theoretical_bound({lambda, delta, kInfinity});
      CHECK(bi.low_term == doctest::Approx(std::sqrt(lambda * delta)).epsilon(1e-14));
      CHECK(bi.high_term == doctest::Approx(std::pow(lambda * delta, 0.25)).epsilon(1e-14));
    }
  // lambda = 1e4, delta = 1e-2, p = 6: 10^(2/3 - 1) + 10^(1/3), computed by hand.
  const auto b6 = theoretical_bound({1e4, 1e-2, 6});
  CHECK(b6.value == doctest::Approx(0.46415888336127786 + 2.1544346900318838).epsilon(1e-12));
  CHECK(b6.regime == Regime::high);
  // Ties go to the high regime: lambda delta = 1 at p = inf makes both terms 1.
  CHECK(theoretical_bound({4, 0.25, kInfinity}).regime == Regime::high);
}
