#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rna/approx.hpp"
#include "rna/errors.hpp"
#include "rna/verify.hpp"
#include "support.hpp"

using namespace rna;
using testing::rel_err;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ApproxParams params_of(const SpaceParams& f, double alpha, double xi = 0.5, double mu = 1.0) {
  ApproxParams ap;
  ap.f = f;
  ap.nu = MeasureSpec{alpha};
  ap.xi = xi;
  ap.mu = mu;
  return ap;
}

// (nu(Gamma), ||s off Gamma||_f) for every subset Gamma of the support.
std::vector<std::pair<double, double>> enumerate_subsets(const CoeffSeq& s, const ApproxParams& ap) {
  const std::vector<DyadicCube> cubes = s.support();
  const std::size_t n = cubes.size();
  std::vector<std::pair<double, double>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double mass = 0.0;
    CoeffSeq rest(s.dim());
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u)
        mass += ap.nu(cubes[i]);
      else
        rest.set(cubes[i], s[cubes[i]]);
    }
    out.emplace_back(mass, space_norm(rest, ap.f));
  }
  return out;
}

double min_error_within(const std::vector<std::pair<double, double>>& subsets, double t) {
  double best = kInf;
  for (const auto& [mass, err] : subsets)
    if (mass <= t * (1 + 1e-12)) best = std::min(best, err);
  return best;
}

double support_mass(const CoeffSeq& s, const MeasureSpec& nu) {
  double m = 0.0;
  for (const auto& [q, v] : s) m += nu(q);
  return m;
}

}  // namespace

TEST_CASE("two unit atoms in b^0_{1,1} with counting measure") {
  CoeffSeq s(1);
  const DyadicCube a(0, {0}), b(0, {1});
  s.set(a, 5.0);
  s.set(b, 3.0);
  const ApproxParams ap = params_of(SpaceParams::besov(0, 1, 1, 1), 0.0);
  for (Solver mode : {Solver::brute, Solver::knapsack}) {
    const Approximation one = sigma_exact(s, 1.0, ap, mode);
    CHECK(one.error == 3.0);
    CHECK(one.support == std::vector<DyadicCube>{a});
    const Approximation none = sigma_exact(s, 0.0, ap, mode);
    CHECK(none.error == 8.0);
    CHECK(none.support.empty());
    CHECK(sigma_exact(s, 2.0, ap, mode).error == 0.0);
  }
  const Approximation g = sigma_greedy(s, 1.0, ap);
  CHECK(g.error == 3.0);
  CHECK(g.support == std::vector<DyadicCube>{a});
  CHECK(sigma_greedy(s, 2.0, ap).error == 0.0);
}

TEST_CASE("knapsack needs an additive error norm, brute a small support") {
  const CoeffSeq s = CoeffSeq::atom(DyadicCube(0, {0}), 1.0);
  CHECK_THROWS_AS(sigma_exact(s, 1.0, params_of(SpaceParams::tl(0, 2, 3, 1), 1.0), Solver::knapsack), CapabilityError);
  std::mt19937_64 rng(1);
  const CoeffSeq big = testing::random_seq(rng, 1, 21, 2, 4);
  CHECK_THROWS_AS(sigma_exact(big, 1.0, params_of(SpaceParams::tl(0, 2, 2, 1), 1.0), Solver::brute), CapabilityError);
}

TEST_CASE("knapsack and brute agree with subset enumeration on 14 entries") {
  std::mt19937_64 rng(17);
  const ApproxParams ap = params_of(SpaceParams::tl(0, 1.5, 1.5, 1), 0.5);
  for (int trial = 0; trial < 4; ++trial) {
    const CoeffSeq s = testing::random_seq(rng, 1, 14, 2, 4);
    const double total = support_mass(s, ap.nu);
    const auto subsets = enumerate_subsets(s, ap);
    for (int k = 0; k < 10; ++k) {
      const double t = testing::uniform(rng, 0.0, total);
      const double oracle = min_error_within(subsets, t);
      const Approximation kn = sigma_exact(s, t, ap, Solver::knapsack);
      const Approximation br = sigma_exact(s, t, ap, Solver::brute);
      CHECK(kn.certified_optimal);
      CHECK(rel_err(kn.error, oracle) <= 1e-12);
      CHECK(rel_err(br.error, oracle) <= 1e-12);
      CHECK(kn.mass <= t * (1 + 1e-12));
    }
  }
}

TEST_CASE("knapsack equals brute on small random instances") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 150; ++trial) {
    const int d = testing::uniform_int(rng, 1, 2);
    const double p = testing::uniform(rng, 0.4, 3);
    const ApproxParams ap = params_of(trial % 2 ? SpaceParams::tl(testing::uniform(rng, -1, 1), p, p, d)
                                                : SpaceParams::besov(testing::uniform(rng, -1, 1), p, p, d),
                                      testing::uniform(rng, -0.5, 1.5));
    const CoeffSeq s = testing::random_seq(rng, d, testing::uniform_int(rng, 1, 12), 1, 3);
    const double t = testing::uniform(rng, 0.0, support_mass(s, ap.nu));
    CHECK(rel_err(sigma_exact(s, t, ap, Solver::knapsack).error, sigma_exact(s, t, ap, Solver::brute).error) <= 1e-12);
  }
}

TEST_CASE("greedy is never better than exact, and within a factor 4 for p = q") {
  std::mt19937_64 rng(53);
  double worst = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = testing::uniform_int(rng, 1, 2);
    const double p = testing::uniform(rng, 0.5, 3);
    const ApproxParams ap = params_of(SpaceParams::tl(testing::uniform(rng, -1, 1), p, p, d), testing::uniform(rng, 0.0, 1.5));
    const CoeffSeq s = testing::random_seq(rng, d, 14, 1, 3);
    const double t = testing::uniform(rng, 0.0, support_mass(s, ap.nu));
    const double exact = sigma_exact(s, t, ap, Solver::knapsack).error;
    const double greedy = sigma_greedy(s, t, ap).error;
    CHECK(greedy >= exact * (1 - 1e-12));
    if (exact > 0.0) worst = std::max(worst, greedy / exact);
  }
  CHECK(worst <= 4.0);
}

TEST_CASE("sigma is nonincreasing in the budget and bounded by the norm") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    const ApproxParams ap = params_of(SpaceParams::tl(0.2, 1.3, 2.1, 1), 0.7);
    const CoeffSeq s = testing::random_seq(rng, 1, 9, 1, 3);
    const double norm = space_norm(s, ap.f);
    double prev = kInf;
    const double total = support_mass(s, ap.nu);
    for (int k = 0; k <= 20; ++k) {
      const double e = sigma_exact(s, total * k / 20.0, ap, Solver::brute).error;
      CHECK(e <= prev);
      CHECK(e <= norm);
      prev = e;
    }
    CHECK(prev == 0.0);
  }
}

TEST_CASE("restriction beats continuous perturbations of the kept coefficients") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const ApproxParams ap = params_of(SpaceParams::tl(0.0, 1.7, 0.8, 1), 1.0);
    const CoeffSeq s = testing::random_seq(rng, 1, 8, 1, 3);
    const double t = testing::uniform(rng, 0.0, support_mass(s, ap.nu));
    const Approximation a = sigma_exact(s, t, ap, Solver::brute);
    for (int k = 0; k < 20; ++k) {
      CoeffSeq candidate(1);
      for (const auto& q : a.support) candidate.set(q, s[q] * (1 + testing::uniform(rng, -0.5, 0.5)));
      CHECK(space_norm(s - candidate, ap.f) >= a.error * (1 - 1e-12));
    }
  }
}

TEST_CASE("subadditivity across budgets") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 60; ++trial) {
    const double p = testing::uniform(rng, 0.4, 2.5);
    const ApproxParams ap = params_of(SpaceParams::besov(0.3, p, p, 1), 0.5);
    const CoeffSeq s1 = testing::random_seq(rng, 1, 8, 1, 3), s2 = testing::random_seq(rng, 1, 8, 1, 3);
    const double t1 = testing::uniform(rng, 0.0, 2.0), t2 = testing::uniform(rng, 0.0, 2.0);
    const double rho = ap.f.rho();
    const double lhs = std::pow(sigma_exact(s1 + s2, t1 + t2, ap, Solver::knapsack).error, rho);
    const double rhs = std::pow(sigma_exact(s1, t1, ap, Solver::knapsack).error, rho) +
                       std::pow(sigma_exact(s2, t2, ap, Solver::knapsack).error, rho);
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("profile examples") {
  const DyadicCube q(2, {1});
  const ApproxParams ap = params_of(SpaceParams::tl(0.5, 2, 2, 1), 0.8);
  const CoeffSeq atom = CoeffSeq::atom(q, -2.5);
  for (Solver solver : {Solver::brute, Solver::knapsack, Solver::greedy}) {
    const SigmaProfile pr = sigma_profile(atom, ap, solver);
    REQUIRE(pr.breakpoints.size() == 2);
    CHECK(pr.breakpoints[0] == 0.0);
    CHECK(rel_err(pr.breakpoints[1], ap.nu(q)) <= 1e-15);
    CHECK(rel_err(pr.errors[0], space_norm(atom, ap.f)) <= 1e-15);
    CHECK(pr.errors[1] == 0.0);
  }

  // Two disjoint atoms of equal mass: three steps, the larger one kept first.
  CoeffSeq two(1);
  two.set(DyadicCube(1, {0}), 1.0);
  two.set(DyadicCube(1, {3}), 4.0);
  for (Solver solver : {Solver::brute, Solver::knapsack, Solver::greedy}) {
    const SigmaProfile pr = sigma_profile(two, ap, solver);
    REQUIRE(pr.breakpoints.size() == 3);
    CHECK(rel_err(pr.errors[1], space_norm(CoeffSeq::atom(DyadicCube(1, {0}), 1.0), ap.f)) <= 1e-15);
    CHECK(pr.errors[2] == 0.0);
  }
}

TEST_CASE("profiles agree with pointwise sigma") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = testing::uniform_int(rng, 1, 2);
    const ApproxParams ap = params_of(SpaceParams::tl(0.1, 1.2, 1.2, d), testing::uniform(rng, 0.2, 1.2));
    const CoeffSeq s = testing::random_seq(rng, d, 12, 1, 3);
    const SigmaProfile kn = sigma_profile(s, ap, Solver::knapsack);
    const SigmaProfile br = sigma_profile(s, ap, Solver::brute);
    CHECK(kn.exact);
    for (std::size_t i = 1; i < kn.errors.size(); ++i) CHECK(kn.errors[i] <= kn.errors[i - 1]);
    for (int k = 0; k < 5; ++k) {
      const double t = testing::uniform(rng, 0.0, kn.breakpoints.back() * 1.1);
      const double e = sigma_exact(s, t, ap, Solver::knapsack).error;
      CHECK(rel_err(kn(t), e) <= 1e-12);
      CHECK(rel_err(br(t), e) <= 1e-12);
    }
  }
}

TEST_CASE("approx_norm on an atom and on zero") {
  const DyadicCube q(-1, {2});
  for (double xi : {0.25, 1.0, 2.0}) {
    for (double mu : {0.5, 1.0, 3.0, kInf}) {
      const ApproxParams ap = params_of(SpaceParams::besov(0.4, 1.5, 2.0, 1), 0.6, xi, mu);
      const CoeffSeq s = CoeffSeq::atom(q, 1.75);
      const double v = ap.nu(q);
      const double factor = std::isinf(mu) ? 1.0 : std::pow(xi * mu, -1.0 / mu);
      CHECK(rel_err(approx_norm(s, ap, Solver::brute), space_norm(s, ap.f) * std::pow(v, xi) * factor) <= 1e-14);
      CHECK(approx_norm(CoeffSeq(1), ap, Solver::brute) == 0.0);
    }
  }
}

TEST_CASE("integral and dyadic forms sandwich each other") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = testing::uniform_int(rng, 1, 2);
    const double xi = testing::uniform(rng, 0.1, 2.0);
    const double mu = trial % 4 == 0 ? kInf : testing::uniform(rng, 0.3, 4.0);
    const double p = testing::uniform(rng, 0.5, 3);
    const ApproxParams ap = params_of(SpaceParams::tl(0.0, p, p, d), testing::uniform(rng, -0.5, 1.5), xi, mu);
    const SigmaProfile pr = sigma_profile(testing::random_seq(rng, d, 10, 2, 3), ap, Solver::knapsack);
    const double a = approx_norm(pr, xi, mu), b = approx_norm_dyadic(pr, xi, mu);
    CHECK(b <= a * std::exp2(xi) * (1 + 1e-12));
    CHECK(b >= a * std::exp2(-xi) * (1 - 1e-12));
  }
}

TEST_CASE("decomposition of a single atom") {
  for (int j = -3; j <= 4; ++j) {
    const DyadicCube q(j, {1});
    const ApproxParams ap = params_of(SpaceParams::tl(0, 2, 2, 1), 0.7, 0.5, 1.0);
    const Decomposition dec = decompose(CoeffSeq::atom(q, 3.0), ap, Solver::knapsack);
    REQUIRE(dec.pieces.size() == 1);
    int k = -100;
    while (std::exp2(k - 1) < ap.nu(q)) ++k;
    CHECK(dec.pieces[0].k == k);
    CHECK(dec.pieces[0].piece == CoeffSeq::atom(q, 3.0));
  }
}

TEST_CASE("decomposition reconstructs, respects budgets and has a bounded score") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = testing::uniform_int(rng, 1, 2);
    const double p = testing::uniform(rng, 0.5, 3);
    const double xi = testing::uniform(rng, 0.2, 1.5);
    const double mu = trial % 4 == 0 ? kInf : testing::uniform(rng, 0.5, 3.0);
    const ApproxParams ap = params_of(SpaceParams::besov(0.2, p, p, d), testing::uniform(rng, 0.0, 1.5), xi, mu);
    const CoeffSeq s = testing::random_seq(rng, d, 12, 1, 3);
    const Decomposition dec = decompose(s, ap, Solver::knapsack);

    CoeffSeq sum(d);
    for (const auto& [k, piece] : dec.pieces) {
      sum = sum + piece;
      CHECK(support_mass(piece, ap.nu) <= std::exp2(k) * (1 + 1e-12));
    }
    // Pieces are differences of restrictions, so the sum is exact.
    CHECK(sum == s);

    const double ratio = dec.score / approx_norm(s, ap, Solver::knapsack);
    const auto [lo, hi] = representation_bounds(xi, mu, ap.f.rho());
    CHECK(ratio >= lo);
    CHECK(ratio <= hi);
  }
}

TEST_CASE("solver names") {
  CHECK(parse_solver("knapsack") == Solver::knapsack);
  CHECK(to_string(Solver::greedy) == "greedy");
  CHECK_THROWS(parse_solver("simplex"));
  CHECK(default_solver(SpaceParams::tl(0, 2, 2, 1), 100) == Solver::knapsack);
  CHECK(default_solver(SpaceParams::tl(0, 2, 3, 1), 10) == Solver::brute);
  CHECK(default_solver(SpaceParams::tl(0, 2, 3, 1), 100) == Solver::greedy);
}
