#include <doctest.h>

#include <cmath>

#include "rna/democracy.hpp"
#include "rna/errors.hpp"
#include "support.hpp"

using namespace rna;
using testing::rel_err;

namespace {

// alpha = 1 needs (s2 - s1)/d = 1/p2, i.e. coefficient exponent beta = 0.
DemocracyCase alpha_one_case(int d, double p1, double q1) {
  DemocracyCase c;
  c.f1 = SpaceParams::tl(0.25, p1, q1, d);
  c.f2 = SpaceParams::tl(0.25 + d / 2.0, 2.0, 2.0, d);
  c.alpha = 1.0;
  return c;
}

DemocracyCase general_case(int d, double s1, double p1, double q1, double s2, double p2) {
  DemocracyCase c;
  c.f1 = SpaceParams::tl(s1, p1, q1, d);
  c.f2 = SpaceParams::tl(s2, p2, 2.0, d);
  c.alpha = c.predicted_alpha();
  return c;
}

}  // namespace

TEST_CASE("predicted alpha and the admissibility predicate") {
  DemocracyCase classical;
  classical.f1 = SpaceParams::tl(0, 2, 2, 1);
  classical.f2 = SpaceParams::tl(0, 2, 2, 1);
  classical.alpha = 0.0;
  CHECK(classical.predicted_alpha() == 0.0);
  CHECK(predicted_admissible(classical).admissible);

  const DemocracyCase one = alpha_one_case(1, 2.0, 2.0);
  CHECK(one.predicted_alpha() == 1.0);
  CHECK(predicted_admissible(one).admissible);

  const Admissibility bad = predicted_admissible(alpha_one_case(1, 2.0, 3.0));
  CHECK_FALSE(bad.admissible);
  CHECK_FALSE(bad.reason.empty());

  DemocracyCase off = classical;
  off.alpha = 0.1;
  CHECK_FALSE(predicted_admissible(off).admissible);
}

TEST_CASE("disjoint grid: cardinality, volumes, disjointness and exact mass") {
  for (int d = 1; d <= 2; ++d) {
    for (std::int64_t n : {1, 2, 4, 8}) {
      for (int l : {0, 1, 2}) {
        const CubeSet g = disjoint_grid(d, n, l);
        CHECK(g.size() == static_cast<std::size_t>(std::pow(n, d)));
        for (const auto& q : g) CHECK(cube_volume(q) == std::exp2(l * d));
        const ContainmentForest forest(std::vector<DyadicCube>(g.begin(), g.end()));
        CHECK(forest.roots().size() == g.size());
        for (double alpha : {0.0, 0.5, 1.0, 1.75}) {
          DemocracyCase c = general_case(d, 0.0, 2.0, 2.0, 0.0, 2.0);
          c.alpha = alpha;
          // 2^{alpha l d} is one correctly rounded exp2; N^d is a power of two.
          const double expected = std::exp2(alpha * (l * d)) * std::pow(static_cast<double>(n), d);
          CHECK(nu_measure(g, MeasureSpec{alpha}) == expected);
          CHECK(disjoint_grid_mass(c, n, l) == expected);
          CHECK(rel_err(expected, std::pow(std::exp2(l * alpha) * static_cast<double>(n), d)) <= 1e-15);
        }
      }
    }
  }
}

TEST_CASE("disjoint grid values against the closed form") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = testing::uniform_int(rng, 1, 2);
    const DemocracyCase c = general_case(d, testing::uniform(rng, -0.5, 0.5), testing::uniform(rng, 0.7, 4),
                                         trial % 5 ? testing::uniform(rng, 0.7, 4) : SpaceParams::infinity,
                                         testing::uniform(rng, 0, 2), testing::uniform(rng, 0.7, 4));
    const double beta = (c.f2.s - c.f1.s) / d - 1.0 / c.f2.p;
    for (std::int64_t n : {1, 2, 4, 8}) {
      for (int l : {0, 1, 2}) {
        const double L = std::exp2(l);
        const double expected = std::pow(L, d * (beta + 1.0 / c.f1.p)) * std::pow(static_cast<double>(n), d / c.f1.p);
        CHECK(rel_err(democracy_value(disjoint_grid(d, n, l), c), expected) <= 1e-9);
        CHECK(rel_err(disjoint_grid_closed_form(c, n, l), expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("alpha = 1: tower and shifted row") {
  for (int d = 1; d <= 2; ++d) {
    for (double p1 : {1.0, 2.0, 3.5}) {
      for (double q1 : {0.8, 2.0, 5.0}) {
        const DemocracyCase c = alpha_one_case(d, p1, q1);
        for (int n : {1, 2, 3, 4}) {
          const double value = democracy_value(tower(d, n), c);
          CHECK(rel_err(value, std::pow(n, 1.0 / q1)) <= 1e-9);
          CHECK(rel_err(tower_value(c, n), std::pow(n, 1.0 / q1)) <= 1e-12);
          CHECK(nu_measure(tower(d, n), MeasureSpec{1.0}) == static_cast<double>(n));
          CHECK(tower_mass(c, n) == static_cast<double>(n));
        }
        for (std::int64_t n : {1, 2, 5, 8, 64}) {
          CHECK(rel_err(democracy_value(shifted_row(d, n), c), std::pow(static_cast<double>(n), 1.0 / p1)) <= 1e-9);
          CHECK(shifted_row(d, n).size() == static_cast<std::size_t>(n));
        }
      }
    }
  }
}

TEST_CASE("tower: level-wise value agrees with forest integration for general alpha") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = testing::uniform_int(rng, 1, 2);
    const DemocracyCase c = general_case(d, testing::uniform(rng, -0.5, 0.5), testing::uniform(rng, 0.7, 4),
                                         testing::uniform(rng, 0.7, 4), testing::uniform(rng, 0, 2),
                                         testing::uniform(rng, 0.7, 4));
    const int n = d == 1 ? 8 : 5;
    const CubeSet t = tower(d, n);
    std::size_t count = 0;
    for (int j = 0; j < n; ++j) count += std::size_t{1} << (j * d);
    CHECK(t.size() == count);
    CHECK(rel_err(tower_value(c, n), democracy_value(t, c)) <= 1e-9);
    CHECK(rel_err(tower_mass(c, n), nu_measure(t, MeasureSpec{c.alpha})) <= 1e-12);
  }
}

TEST_CASE("admissible grids: ratio does not depend on L") {
  const DemocracyCase c = general_case(2, 0.2, 1.5, 2.5, 1.1, 3.0);
  REQUIRE(predicted_admissible(c).admissible);
  SweepSpec spec;
  spec.families = {FamilyKind::disjoint_grid};
  spec.sizes = {1, 2, 4, 8};
  spec.grid_log_sides = {-2, -1, 0, 1, 2, 3};
  const auto rows = democracy_ratio_sweep(c, spec);
  CHECK(rows.size() == 24);
  for (const auto& r : rows) CHECK(rel_err(r.ratio, rows.front().ratio) <= 1e-9);
  CHECK(ratio_spread(rows) <= 1 + 1e-9);
}

TEST_CASE("alpha = 1 with p1 != q1: spread exponent |1/q1 - 1/p1|") {
  const double p1 = 2.0, q1 = 4.0;
  const DemocracyCase c = alpha_one_case(1, p1, q1);
  std::vector<double> ns, spread;
  for (int k = 3; k <= 10; ++k) {
    const int n = 1 << k;
    // Both families have nu_1 = N, so the ratio is value / N^{1/p1}.
    const double tower_ratio = tower_value(c, n) / std::pow(n, 1.0 / p1);
    const double row_ratio = democracy_value(shifted_row(1, n), c) / std::pow(n, 1.0 / p1);
    ns.push_back(n);
    spread.push_back(std::max(tower_ratio, row_ratio) / std::min(tower_ratio, row_ratio));
  }
  CHECK(std::abs(loglog_slope(ns, spread) - std::abs(1.0 / q1 - 1.0 / p1)) <= 0.05);
}

TEST_CASE("random mixed sets") {
  std::mt19937_64 rng(101);
  const CubeSet g = random_mixed(2, 40, 3, rng);
  CHECK(g.size() == 40);
  for (const auto& q : g) {
    CHECK(q.scale >= -3);
    CHECK(q.scale <= 3);
  }
  std::mt19937_64 a(5), b(5);
  CHECK(random_mixed(1, 20, 4, a).size() == random_mixed(1, 20, 4, b).size());

  // Counting measure in the classical case: bounded ratios.
  const DemocracyCase c = general_case(1, 0.0, 2.0, 2.0, 0.5, 2.0);
  REQUIRE(predicted_admissible(c).admissible);
  SweepSpec spec;
  spec.families = {FamilyKind::random_mixed};
  spec.sizes = {8, 16};
  spec.random_draws = 30;
  spec.seed = 3;
  CHECK(ratio_spread(democracy_ratio_sweep(c, spec)) < 10.0);
}

TEST_CASE("loglog slope on exact power data") {
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.37));
  CHECK(rel_err(loglog_slope(x, y), 0.37) <= 1e-12);
}
