#include "rna/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "rna/errors.hpp"
#include "rna/lorentz.hpp"
#include "rna/spaces.hpp"
#include "rna/weights.hpp"

namespace rna {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

double rel_err(double value, double expected) {
  if (value == expected) return 0.0;
  return std::abs(value - expected) / std::max(std::abs(expected), std::numeric_limits<double>::min());
}

// Stream-style params echo.
class Params {
public:
  explicit Params(std::string base = {}) : text_(std::move(base)) {}

  template <class T>
  Params& operator()(const std::string& key, const T& value) {
    if (!text_.empty()) text_ += ' ';
    std::ostringstream os;
    os.precision(17);
    os << value;
    text_ += key + '=' + os.str();
    return *this;
  }
  Params& space(const std::string& key, const SpaceParams& f) { return (*this)(key, f.describe()); }
  operator std::string() const { return text_; }

private:
  std::string text_;
};

std::string id(int criterion, const std::string& name, std::size_t index = std::string::npos) {
  char buf[64];
  if (index == std::string::npos)
    std::snprintf(buf, sizeof buf, "c%02d.%s", criterion, name.c_str());
  else
    std::snprintf(buf, sizeof buf, "c%02d.%s/%04zu", criterion, name.c_str(), index);
  return buf;
}

ReportRow make_row(std::string experiment, std::string params, std::string quantity, double value,
                   double expected, double tolerance, bool pass, std::string anchor) {
  ReportRow r;
  r.experiment = std::move(experiment);
  r.params = std::move(params);
  r.quantity = std::move(quantity);
  r.value = value;
  r.expected = expected;
  r.tolerance = tolerance;
  r.pass = pass;
  r.anchor = std::move(anchor);
  return r;
}

CriterionResult finish(int id_, std::string title, std::vector<ReportRow> rows, Clock::time_point t0) {
  CriterionResult c;
  c.id = id_;
  c.title = std::move(title);
  c.wall_ms = ms_since(t0);
  for (auto& r : rows) r.wall_ms = c.wall_ms;
  c.pass = !rows.empty() && all_pass(rows);
  c.rows = std::move(rows);
  return c;
}

double random_exponent(std::mt19937_64& rng, double lo, double hi, double p_inf) {
  return coin(rng, p_inf) ? kInf : uniform(rng, lo, hi);
}

SpaceParams random_space(std::mt19937_64& rng, int d, bool allow_inf) {
  const bool tl = coin(rng, 0.5);
  const double s = uniform(rng, -1.5, 1.5);
  const double p = tl ? uniform(rng, 0.3, 5.0) : random_exponent(rng, 0.3, 5.0, allow_inf ? 0.15 : 0.0);
  const double q = random_exponent(rng, 0.3, 5.0, allow_inf ? 0.15 : 0.0);
  return tl ? SpaceParams::tl(s, p, q, d) : SpaceParams::besov(s, p, q, d);
}

SpaceParams random_additive_space(std::mt19937_64& rng, int d) {
  const double p = uniform(rng, 0.4, 4.0);
  const double s = uniform(rng, -1.0, 1.0);
  return coin(rng, 0.5) ? SpaceParams::tl(s, p, p, d) : SpaceParams::besov(s, p, p, d);
}

}  // namespace

CoeffSeq random_sequence(std::mt19937_64& rng, int d, std::size_t n, int J) {
  const CubeSet cubes = random_mixed(d, n, J, rng);
  CoeffSeq s(d);
  for (const auto& q : cubes) {
    const double magnitude = std::pow(10.0, uniform(rng, -2.0, 1.0));
    s.set(q, coin(rng, 0.5) ? magnitude : -magnitude);
  }
  return s;
}

// 1 ----------------------------------------------------------------------

CriterionResult verify_atom_norms(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x01);
  const char* anchor = "atom norm equals |Q|^(-s/d+1/p-1/2)";
  constexpr double tol = 1e-12;
  std::vector<ReportRow> rows;
  double worst = 0.0;
  std::string worst_params;
  for (std::size_t i = 0; i < 200; ++i) {
    const int d = uniform_int(rng, 1, 3);
    SpaceParams f = random_space(rng, d, true);
    f.s = uniform(rng, -3.0, 3.0);
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    for (auto& x : k) x = uniform_int(rng, -100, 100);
    const DyadicCube q(uniform_int(rng, -12, 12), k);
    const double inv_p = std::isinf(f.p) ? 0.0 : 1.0 / f.p;
    const double expected = std::pow(cube_volume(q), -f.s / d + inv_p - 0.5);
    const double value = space_norm(CoeffSeq::atom(q), f);
    const double err = rel_err(value, expected);
    const std::string params = Params().space("f", f)("Q", to_string(q));
    if (err > worst) {
      worst = err;
      worst_params = params;
    }
    if (err > tol) rows.push_back(make_row(id(1, "atom", i), params, "norm", value, expected, tol, false, anchor));
  }
  rows.push_back(make_row(id(1, "atom_max_rel_err"), Params()("draws", 200)("seed", cfg.seed)("worst", worst_params),
                          "max_rel_err", worst, 0.0, tol, worst <= tol, anchor));
  return finish(1, "atom norms", std::move(rows), t0);
}

// 2 ----------------------------------------------------------------------

CriterionResult verify_democracy_closed_forms(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  constexpr double tol = 1e-9;
  std::vector<ReportRow> rows;
  std::size_t index = 0;

  for (int d = 1; d <= 2; ++d) {
    const std::vector<DemocracyCase> cases = {
        {SpaceParams::tl(0.5, 2.0, 1.5, d), SpaceParams::tl(1.0, 3.0, 2.0, d), 0.0},
        {SpaceParams::tl(-0.3, 1.0, kInf, d), SpaceParams::besov(0.7, 2.0, 4.0, d), 0.0},
        {SpaceParams::tl(0.0, 0.7, 3.0, d), SpaceParams::tl(-0.5, 1.5, 1.0, d), 0.0},
    };
    for (DemocracyCase c : cases) {
      c.alpha = c.predicted_alpha() + cfg.alpha_offset;
      for (std::int64_t n : {1, 2, 4, 8}) {
        for (int l : {0, 1, 2}) {
          const CubeSet g = disjoint_grid(d, n, l);
          const std::string params =
              Params().space("f1", c.f1).space("f2", c.f2)("alpha", c.alpha)("N", n)("L", 1 << l);
          const double value = democracy_value(g, c);
          const double expected = disjoint_grid_closed_form(c, n, l);
          rows.push_back(make_row(id(2, "grid_value", index), params, "democracy_value", value, expected, tol,
                                  rel_err(value, expected) <= tol, "grid family value L^(d(gamma/q1+1/p1)) N^(d/p1)"));
          const double mass = nu_measure(g, MeasureSpec{c.alpha});
          const double mass_expected = disjoint_grid_mass(c, n, l);
          rows.push_back(make_row(id(2, "grid_mass", index), params, "nu_alpha", mass, mass_expected, tol,
                                  rel_err(mass, mass_expected) <= tol, "grid family mass (L^alpha N)^d"));
          const double count = static_cast<double>(g.size());
          const double count_expected = std::pow(static_cast<double>(n), d);
          rows.push_back(make_row(id(2, "grid_count", index), params, "cubes", count, count_expected, 0.0,
                                  count == count_expected, "grid family has N^d cubes"));
          ++index;
        }
      }
    }

    // alpha = 1: (s2 - s1)/d = 1/p2 and p1 != q1.
    DemocracyCase c{SpaceParams::tl(0.2, 3.0, 1.5, d), SpaceParams::tl(0.2 + d / 2.0, 2.0, 2.0, d), 1.0};
    for (int n : {1, 2, 4, 8}) {
      const std::string params = Params().space("f1", c.f1).space("f2", c.f2)("alpha", 1)("N", n);
      const CubeSet t = tower(d, n);
      const double tv = democracy_value(t, c);
      const double tv_expected = std::pow(n, 1.0 / c.f1.q);
      rows.push_back(make_row(id(2, "tower_value", index), params, "democracy_value", tv, tv_expected, tol,
                              rel_err(tv, tv_expected) <= tol, "tower value N^(1/q1) at alpha=1"));
      const double level = tower_value(c, n);
      rows.push_back(make_row(id(2, "tower_levelwise", index), params, "levelwise_value", level, tv, tol,
                              rel_err(level, tv) <= tol, "tower level-wise evaluation matches forest integration"));
      const double tm = nu_measure(t, MeasureSpec{1.0});
      rows.push_back(make_row(id(2, "tower_mass", index), params, "nu_1", tm, n, 0.0, tm == n,
                              "tower mass nu_1 = N"));
      const CubeSet r = shifted_row(d, n);
      const double rv = democracy_value(r, c);
      const double rv_expected = std::pow(n, 1.0 / c.f1.p);
      rows.push_back(make_row(id(2, "row_value", index), params, "democracy_value", rv, rv_expected, tol,
                              rel_err(rv, rv_expected) <= tol, "shifted row value N^(1/p1) at alpha=1"));
      ++index;
    }
  }
  return finish(2, "democracy closed forms", std::move(rows), t0);
}

// 3 ----------------------------------------------------------------------

CriterionResult verify_admissibility(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x03);
  std::vector<ReportRow> rows;
  constexpr std::size_t kDraws = 20;
  constexpr std::size_t kSets = 100;
  constexpr std::size_t kBaseCount = 16;
  constexpr int kScaleRange = 4;
  constexpr double kDoublingFactor = 1.5;

  for (std::size_t i = 0; i < kDraws; ++i) {
    const int d = uniform_int(rng, 1, 2);
    const double p1 = uniform(rng, 0.6, 4.0);
    const double q1 = random_exponent(rng, 0.6, 4.0, 0.2);
    const double s1 = uniform(rng, -1.0, 1.0);
    const double p2 = uniform(rng, 0.6, 4.0);
    const double target = coin(rng, 0.5) ? uniform(rng, -1.5, 0.5) : uniform(rng, 1.5, 3.0);
    const double s2 = s1 + d * ((target - 1.0) / p1 + 1.0 / p2);
    const SpaceParams f2 = coin(rng, 0.5) ? SpaceParams::tl(s2, p2, uniform(rng, 0.5, 4.0), d)
                                          : SpaceParams::besov(s2, p2, uniform(rng, 0.5, 4.0), d);
    DemocracyCase c{SpaceParams::tl(s1, p1, q1, d), f2, 0.0};
    c.alpha = c.predicted_alpha() + cfg.alpha_offset;
    const std::string params = Params().space("f1", c.f1).space("f2", c.f2)("alpha", c.alpha);

    const Admissibility adm = predicted_admissible(c);
    rows.push_back(make_row(id(3, "predicate", i), params + " reason=" + adm.reason, "admissible",
                            adm.admissible, 1.0, 0.0, adm.admissible, "admissible iff alpha = p1((s2-s1)/d-1/p2)+1"));

    // Ratio independent of L at fixed N.
    SweepSpec grid{{FamilyKind::disjoint_grid}, {4}, {0, 1, 2, 3}};
    const double grid_spread = ratio_spread(democracy_ratio_sweep(c, grid));
    rows.push_back(make_row(id(3, "grid_scaling", i), params + " N=4 l=0..3", "ratio_spread", grid_spread, 1.0, 1e-9,
                            std::abs(grid_spread - 1.0) <= 1e-9, "admissible ratio independent of L"));

    // Set sizes drawn uniformly from [1, n]; a fixed size makes the spread of
    // 100 draws too noisy to compare across a doubling.
    auto sizes_up_to = [&](std::size_t n) {
      std::vector<std::int64_t> sizes(kSets);
      for (auto& k : sizes) k = uniform_int(rng, 1, static_cast<int>(n));
      return sizes;
    };
    SweepSpec random{{FamilyKind::random_mixed}, sizes_up_to(kBaseCount), {0}, kScaleRange, 1, rng()};
    const double spread_n = ratio_spread(democracy_ratio_sweep(c, random));
    random.sizes = sizes_up_to(2 * kBaseCount);
    random.seed = rng();
    const double spread_2n = ratio_spread(democracy_ratio_sweep(c, random));
    const double change = std::max(spread_2n / spread_n, spread_n / spread_2n);
    rows.push_back(make_row(id(3, "random_spread", i),
                            Params(params)("max_n", kBaseCount)("sets", kSets)("J", kScaleRange)("spread_n", spread_n)(
                                "spread_2n", spread_2n),
                            "spread_change", change, 1.0, kDoublingFactor, change < kDoublingFactor,
                            "two-sided democracy: ratio spread stable under doubling"));
  }

  // alpha = 1 with p1 != q1: towers and rows drift apart like N^|1/q1-1/p1|.
  for (std::size_t i = 0; i < 5; ++i) {
    const int d = uniform_int(rng, 1, 2);
    double p1 = 0, q1 = 0;
    do {
      p1 = uniform(rng, 0.6, 4.0);
      q1 = uniform(rng, 0.6, 4.0);
    } while (std::abs(1.0 / q1 - 1.0 / p1) < 0.1);
    const double s1 = uniform(rng, -1.0, 1.0);
    const double p2 = uniform(rng, 0.6, 4.0);
    DemocracyCase c{SpaceParams::tl(s1, p1, q1, d), SpaceParams::tl(s1 + d / p2, p2, 2.0, d), 1.0 + cfg.alpha_offset};
    const std::string params = Params().space("f1", c.f1).space("f2", c.f2)("alpha", c.alpha);
    const Admissibility adm = predicted_admissible(c);
    rows.push_back(make_row(id(3, "predicate_alpha1", i), params + " reason=" + adm.reason, "admissible",
                            adm.admissible, 0.0, 0.0, !adm.admissible, "alpha=1 forces p1=q1"));
    std::vector<double> ns, spreads;
    for (std::int64_t n = 8; n <= 1024; n *= 2) {
      SweepSpec both{{FamilyKind::tower, FamilyKind::shifted_row}, {n}};
      ns.push_back(static_cast<double>(n));
      spreads.push_back(ratio_spread(democracy_ratio_sweep(c, both)));
    }
    const double slope = loglog_slope(ns, spreads);
    const double expected = std::abs(1.0 / q1 - 1.0 / p1);
    rows.push_back(make_row(id(3, "divergence_exponent", i), params + " N=8..1024", "fitted_exponent", slope, expected,
                            0.05, std::abs(slope - expected) <= 0.05,
                            "tower vs shifted row spread grows like N^|1/q1-1/p1|"));
  }
  return finish(3, "admissibility dichotomy", std::move(rows), t0);
}

// 4 ----------------------------------------------------------------------

CriterionResult verify_lorentz_besov(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x04);
  const double taus[] = {0.5, 1.0, 1.7, 3.0};
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < 50; ++i) {
    const int d = uniform_int(rng, 1, 2);
    const CoeffSeq s = random_sequence(rng, d, static_cast<std::size_t>(uniform_int(rng, 1, 30)), 5);
    const double s1 = uniform(rng, -1.0, 1.0);
    const double p1 = uniform(rng, 0.5, 4.0);
    SpaceParams f2 = random_space(rng, d, false);
    f2.s = uniform(rng, -1.0, 2.0);
    const double tau = taus[i % 4];
    const LorentzBesovCheck check = lorentz_equals_besov_check(s, s1, p1, f2, tau);
    const double scale = std::max({check.lhs, check.rhs, 1.0});
    rows.push_back(make_row(id(4, "identity", i),
                            Params()("s1", s1)("p1", p1).space("f2", f2)("tau", tau)("support", s.size())(
                                "alpha", check.alpha)("gamma", check.gamma),
                            "lorentz_minus_besov_scaled", std::abs(check.lhs - check.rhs) / scale, 0.0, 1e-10, check.ok,
                            "l^{tau,tau}(u,nu_alpha) = b^gamma_{tau,tau} with equal quasi-norms"));
  }
  return finish(4, "Lorentz=Besov identity", std::move(rows), t0);
}

// 5 ----------------------------------------------------------------------

CriterionResult verify_sigma_oracle(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x05);
  constexpr double tol = 1e-12;
  const char* anchor = "knapsack sigma equals exhaustive enumeration";
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < 50; ++i) {
    const int d = uniform_int(rng, 1, 2);
    const std::size_t n = 10 + i % 5;
    const CoeffSeq s = random_sequence(rng, d, n, 4);
    ApproxParams ap;
    ap.f = random_additive_space(rng, d);
    ap.nu = MeasureSpec{uniform(rng, -1.0, 2.0)};
    const SigmaProfile brute = sigma_profile(s, ap, Solver::brute);
    const SigmaProfile knap = sigma_profile(s, ap, Solver::knapsack);

    // Compare inside every step of the brute staircase, away from breakpoints
    // that equal-mass subsets may place an ulp apart.
    double worst = 0.0;
    const auto& b = brute.breakpoints;
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      const double t = 0.5 * (b[k] + b[k + 1]);
      worst = std::max(worst, rel_err(knap(t), brute(t)));
    }
    // Single budgets through the branch and bound.
    std::size_t support_matches = 0;
    constexpr int kBudgets = 6;
    for (int m = 0; m < kBudgets; ++m) {
      const double t = uniform(rng, 0.0, 1.1) * b.back();
      const Approximation a = sigma_exact(s, t, ap, Solver::knapsack);
      const Approximation e = sigma_exact(s, t, ap, Solver::brute);
      worst = std::max(worst, rel_err(a.error, e.error));
      auto sa = a.support, se = e.support;
      std::sort(sa.begin(), sa.end());
      std::sort(se.begin(), se.end());
      support_matches += sa == se;
      if (!a.certified_optimal) worst = kInf;
    }
    rows.push_back(make_row(id(5, "oracle", i),
                            Params().space("f", ap.f)("alpha", ap.nu.alpha)("support", n)("budgets", kBudgets)(
                                "support_matches", support_matches),
                            "max_rel_err", worst, 0.0, tol, worst <= tol, anchor));
  }
  return finish(5, "sigma oracle equivalence", std::move(rows), t0);
}

// 6 ----------------------------------------------------------------------

CriterionResult verify_approx_norm_forms(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x06);
  const double mus[] = {0.5, 1.0, 2.0, 3.3, kInf};
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < 100; ++i) {
    const int d = uniform_int(rng, 1, 2);
    const CoeffSeq s = random_sequence(rng, d, static_cast<std::size_t>(uniform_int(rng, 1, 12)), 4);
    ApproxParams ap;
    ap.f = coin(rng, 0.5) ? random_additive_space(rng, d) : random_space(rng, d, true);
    ap.nu = MeasureSpec{uniform(rng, -1.0, 2.0)};
    ap.xi = uniform(rng, 0.1, 2.0);
    ap.mu = mus[uniform_int(rng, 0, 4)];
    const Solver solver = ap.f.additive() ? Solver::knapsack : Solver::brute;
    const SigmaProfile prof = sigma_profile(s, ap, solver);
    const double integral = approx_norm(prof, ap.xi, ap.mu);
    const double dyadic = approx_norm_dyadic(prof, ap.xi, ap.mu);
    const double ratio = integral / dyadic;
    const double lo = std::exp2(-ap.xi) * (1 - 1e-12), hi = std::exp2(ap.xi) * (1 + 1e-12);
    rows.push_back(make_row(id(6, "sandwich", i),
                            Params().space("f", ap.f)("alpha", ap.nu.alpha)("xi", ap.xi)("mu", ap.mu)("support",
                                                                                                      s.size()),
                            "integral_over_dyadic", ratio, 1.0, ap.xi, ratio >= lo && ratio <= hi,
                            "integral and dyadic forms agree within [2^-xi, 2^xi]"));
  }
  for (std::size_t i = 0; i < 50; ++i) {
    const int d = uniform_int(rng, 1, 2);
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    for (auto& x : k) x = uniform_int(rng, -8, 8);
    const DyadicCube q(uniform_int(rng, -6, 6), k);
    const double c = std::pow(10.0, uniform(rng, -3, 3)) * (coin(rng, 0.5) ? 1 : -1);
    ApproxParams ap;
    ap.f = random_space(rng, d, true);
    ap.nu = MeasureSpec{uniform(rng, -1.0, 2.0)};
    ap.xi = uniform(rng, 0.1, 2.0);
    ap.mu = mus[uniform_int(rng, 0, 4)];
    const CoeffSeq atom = CoeffSeq::atom(q, c);
    const double value = approx_norm(atom, ap, Solver::brute);
    const double factor = std::isinf(ap.mu) ? 1.0 : std::pow(ap.xi * ap.mu, -1.0 / ap.mu);
    const double expected = std::abs(c) * atom_norm(q, ap.f) * std::pow(ap.nu(q), ap.xi) * factor;
    rows.push_back(make_row(id(6, "atom", i),
                            Params().space("f", ap.f)("alpha", ap.nu.alpha)("xi", ap.xi)("mu", ap.mu)("Q", to_string(q))(
                                "c", c),
                            "approx_norm", value, expected, 1e-10, rel_err(value, expected) <= 1e-10,
                            "single atom approx norm ||c e_Q|| nu(Q)^xi (xi mu)^(-1/mu)"));
  }
  return finish(6, "approximation-norm consistency", std::move(rows), t0);
}

// 7 ----------------------------------------------------------------------

namespace {

LorentzParams jackson_lorentz(const DemocracyCase& c, double xi) {
  LorentzParams lp;
  lp.eta = WeightFn::power(c.f1.p);
  lp.xi = xi;
  lp.mu = kInf;
  lp.u = WeightSeq{c.f2}.as_weighting();
  return lp;
}

LorentzParams bernstein_lorentz(const DemocracyCase& c, double xi) {
  LorentzParams lp = jackson_lorentz(c, xi);
  lp.mu = 1.0 / (xi + 1.0 / c.f1.p);
  return lp;
}

ApproxParams approx_params(const DemocracyCase& c, double xi) {
  ApproxParams ap;
  ap.xi = xi;
  ap.mu = kInf;
  ap.f = c.f1;
  ap.nu = MeasureSpec{c.alpha};
  return ap;
}

std::vector<CoeffSeq> random_suite(const DemocracyCase& c, std::size_t n, std::size_t count, int J,
                                   std::mt19937_64& rng) {
  const int d = c.f1.d;
  const Weighting u = WeightSeq{c.f2}.as_weighting();
  std::vector<CoeffSeq> suite;
  for (std::size_t i = 0; i < count; ++i) {
    // Alternate raw random coefficients with normalised indicators, which are
    // the extremal sequences for both inequalities.
    if (i % 2 == 0) {
      suite.push_back(random_sequence(rng, d, n, J));
    } else {
      suite.push_back(normalized_indicator(random_mixed(d, n, J, rng), u));
    }
  }
  return suite;
}

CoeffSeq grid_indicator(const DemocracyCase& c, std::size_t n) {
  const int l = -static_cast<int>(std::lround(std::log2(static_cast<double>(n))));
  return normalized_indicator(disjoint_grid(1, static_cast<std::int64_t>(n), l), WeightSeq{c.f2}.as_weighting());
}

// Greedy only bounds sigma from above, which keeps a Jackson constant an upper estimate.
Solver jackson_solver(const SpaceParams& f) { return f.additive() ? Solver::knapsack : Solver::greedy; }

}  // namespace

ConstantSeries jackson_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes,
                              std::size_t per_size, int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConstantSeries out;
  const ApproxParams ap = approx_params(c, xi);
  for (std::size_t n : sizes) {
    const auto suite = random_suite(c, n, per_size, J, rng);
    out.sizes.push_back(n);
    out.constants.push_back(jackson_constant(suite, ap, jackson_lorentz(c, xi), jackson_solver(c.f1)));
  }
  return out;
}

ConstantSeries bernstein_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes,
                                std::size_t per_size, int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConstantSeries out;
  const ApproxParams ap = approx_params(c, xi);
  for (std::size_t n : sizes) {
    const auto suite = random_suite(c, n, per_size, J, rng);
    out.sizes.push_back(n);
    out.constants.push_back(bernstein_constant(suite, ap, bernstein_lorentz(c, xi)));
  }
  return out;
}

ConstantSeries jackson_indicator_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes) {
  if (c.f1.d != 1) throw ContractViolation("indicator controls are defined in d = 1");
  ConstantSeries out;
  const ApproxParams ap = approx_params(c, xi);
  for (std::size_t n : sizes) {
    const CoeffSeq s = grid_indicator(c, n);
    out.sizes.push_back(n);
    out.constants.push_back(jackson_constant(std::span(&s, 1), ap, jackson_lorentz(c, xi), jackson_solver(c.f1)));
  }
  return out;
}

ConstantSeries bernstein_indicator_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes) {
  if (c.f1.d != 1) throw ContractViolation("indicator controls are defined in d = 1");
  ConstantSeries out;
  const ApproxParams ap = approx_params(c, xi);
  for (std::size_t n : sizes) {
    const CoeffSeq s = grid_indicator(c, n);
    out.sizes.push_back(n);
    out.constants.push_back(bernstein_constant(std::span(&s, 1), ap, bernstein_lorentz(c, xi)));
  }
  return out;
}

CriterionResult verify_jackson_bernstein(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  const std::size_t sizes[] = {16, 32, 64};
  constexpr double kDrift = 4.0;
  constexpr double xi = 0.5;
  std::vector<ReportRow> rows;

  // Counting measure in d = 1, 2 and the restricted alpha = 1, 2 cases; all
  // keep alpha d integral so the exact profiles stay tractable at 64 cubes.
  struct Case {
    DemocracyCase c;
    int J;
  };
  std::vector<Case> cases = {
      {{SpaceParams::tl(0.0, 2.0, 2.0, 1), SpaceParams::tl(0.0, 2.0, 2.0, 1), 0.0}, 4},
      {{SpaceParams::tl(0.0, 1.5, 1.5, 2), SpaceParams::besov(-2.0 / 3.0, 3.0, 1.0, 2), 0.0}, 2},
      {{SpaceParams::tl(0.5, 2.0, 2.0, 1), SpaceParams::tl(1.0, 2.0, 2.0, 1), 0.0}, 4},
      {{SpaceParams::tl(0.5, 2.0, 2.0, 1), SpaceParams::tl(1.5, 2.0, 2.0, 1), 0.0}, 3},
  };
  std::size_t index = 0;
  for (auto& [c, J] : cases) {
    // Snap away rounding so the masses sit exactly on the dyadic lattice.
    c.alpha = std::round(c.predicted_alpha() * 1e12) / 1e12;
    const std::string params = Params().space("f1", c.f1).space("f2", c.f2)("alpha", c.alpha)("xi", xi)("J", J);
    const auto seed = cfg.seed ^ (0x0700 + index);
    for (int which = 0; which < 2; ++which) {
      const ConstantSeries series = which == 0 ? jackson_series(c, xi, sizes, 8, J, seed)
                                               : bernstein_series(c, xi, sizes, 8, J, seed);
      const char* name = which == 0 ? "jackson" : "bernstein";
      bool finite = true;
      for (std::size_t k = 0; k < series.constants.size(); ++k) {
        const double v = series.constants[k];
        finite = finite && std::isfinite(v) && v > 0;
        rows.push_back(make_row(id(7, std::string(name) + "_constant", index * 10 + k),
                                Params(params)("support", series.sizes[k]), "constant", v, kNaN, kNaN,
                                std::isfinite(v) && v > 0, "admissible empirical constant is finite"));
      }
      const auto [lo, hi] = std::minmax_element(series.constants.begin(), series.constants.end());
      const double drift = *hi / *lo;
      rows.push_back(make_row(id(7, std::string(name) + "_drift", index), Params(params)("supports", "16,32,64"),
                              "max_over_min", drift, 1.0, kDrift, finite && drift < kDrift,
                              "admissible constant drift under support doubling"));
    }
    ++index;
  }

  // Negative controls on Gamma_{N,1/N}: alpha off the admissible value.
  const DemocracyCase base{SpaceParams::tl(0.0, 2.0, 2.0, 1), SpaceParams::tl(0.0, 2.0, 2.0, 1), 0.0};
  for (int which = 0; which < 2; ++which) {
    DemocracyCase c = base;
    c.alpha = base.predicted_alpha() + (which == 0 ? 0.5 : -0.5);
    const ConstantSeries series =
        which == 0 ? jackson_indicator_series(c, xi, sizes) : bernstein_indicator_series(c, xi, sizes);
    const char* name = which == 0 ? "jackson_control" : "bernstein_control";
    bool increasing = true;
    for (std::size_t k = 1; k < series.constants.size(); ++k)
      increasing = increasing && series.constants[k] > series.constants[k - 1];
    for (std::size_t k = 0; k < series.constants.size(); ++k)
      rows.push_back(make_row(id(7, name, k),
                              Params().space("f1", c.f1).space("f2", c.f2)("alpha", c.alpha)("xi", xi)("N",
                                                                                                      series.sizes[k]),
                              "constant", series.constants[k], kNaN, kNaN, increasing,
                              "inadmissible alpha: constant grows with N"));
  }
  return finish(7, "Jackson/Bernstein constants", std::move(rows), t0);
}

// 8 ----------------------------------------------------------------------

std::pair<double, double> representation_bounds(double xi, double mu, double rho) {
  // Upper: ||s_k|| <= 2^{1/rho} sigma(2^{k-2}) by the rho-triangle inequality.
  // Lower: sigma(2^{k-2}) <= (sum_{j>=k} ||s_j||^rho)^{1/rho}, then a Hardy
  // inequality with constant ch. Both are moved to the integral form through
  // the dyadic sandwich.
  const double ln2_factor = std::isinf(mu) ? 1.0 : std::pow(std::log(2.0), -1.0 / mu);
  const double hi = std::exp2(1.0 / rho + 3.0 * xi) * ln2_factor;
  double ch = 0.0;
  if (std::isinf(mu)) {
    ch = std::pow(1.0 - std::exp2(-xi * rho), -1.0 / rho);
  } else if (mu <= rho) {
    ch = std::pow(1.0 - std::exp2(-xi * mu), -1.0 / mu);
  } else {
    const double r = mu / rho;
    const double rp = r / (r - 1.0);
    const double a = std::pow(1.0 - std::exp2(-xi * rho * rp / 2.0), -1.0 / rp);
    ch = std::pow(std::pow(a, r) / (1.0 - std::exp2(-xi * mu / 2.0)), 1.0 / mu);
  }
  const double lo = std::exp2(xi) * ln2_factor / ch;
  return {lo, hi};
}

CriterionResult verify_representation(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x08);
  const double mus[] = {0.5, 1.0, 2.0, kInf};
  std::vector<ReportRow> rows;
  double min_scaled = kInf, max_scaled = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const int d = uniform_int(rng, 1, 2);
    ApproxParams ap;
    ap.f = coin(rng, 0.6) ? random_additive_space(rng, d) : random_space(rng, d, true);
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, ap.f.additive() ? 14 : 9));
    const CoeffSeq s = random_sequence(rng, d, n, 3);
    ap.nu = MeasureSpec{uniform(rng, -1.0, 1.5)};
    ap.xi = uniform(rng, 0.2, 1.5);
    ap.mu = mus[uniform_int(rng, 0, 3)];
    const Solver solver = ap.f.additive() ? Solver::knapsack : Solver::brute;
    const Decomposition dec = decompose(s, ap, solver);
    const std::string params =
        Params().space("f", ap.f)("alpha", ap.nu.alpha)("xi", ap.xi)("mu", ap.mu)("support", n)("solver", to_string(solver));

    CoeffSeq sum(d);
    bool budgets_ok = true;
    for (const auto& piece : dec.pieces) {
      sum = sum + piece.piece;
      budgets_ok = budgets_ok && nu_measure(piece.piece.support(), ap.nu) <= std::ldexp(1.0, piece.k) * (1 + 1e-12);
    }
    rows.push_back(make_row(id(8, "reconstruct", i), params, "exact_sum", sum == s, 1.0, 0.0, sum == s,
                            "representation reconstructs s coefficient-wise"));
    rows.push_back(make_row(id(8, "budget", i), params, "pieces_within_budget", budgets_ok, 1.0, 0.0, budgets_ok,
                            "piece s_k supported on mass <= 2^k"));
    const double norm = approx_norm(s, ap, solver);
    const double ratio = dec.score / norm;
    const auto [lo, hi] = representation_bounds(ap.xi, ap.mu, ap.f.rho());
    min_scaled = std::min(min_scaled, ratio / lo);
    max_scaled = std::max(max_scaled, ratio / hi);
    const bool within = ratio >= lo * (1 - 1e-12) && ratio <= hi * (1 + 1e-12);
    rows.push_back(make_row(id(8, "score_ratio", i), Params(params)("lo", lo)("hi", hi), "score_over_approx_norm",
                            ratio, kNaN, kNaN, within, "score within two-sided bound of approx norm"));
  }
  rows.push_back(make_row(id(8, "bound_use"), Params()("cases", 100)("seed", cfg.seed), "min_ratio_over_lo",
                          min_scaled, kNaN, kNaN, min_scaled >= 1 - 1e-12, "score within two-sided bound of approx norm"));
  rows.push_back(make_row(id(8, "bound_use_hi"), Params()("cases", 100)("seed", cfg.seed), "max_ratio_over_hi",
                          max_scaled, kNaN, kNaN, max_scaled <= 1 + 1e-12, "score within two-sided bound of approx norm"));
  return finish(8, "dyadic representation", std::move(rows), t0);
}

// 9 ----------------------------------------------------------------------

namespace {

WeightFn random_weight(std::mt19937_64& rng) {
  const double xi = coin(rng, 0.5) ? 0.0 : uniform(rng, 0.0, 1.0);
  if (coin(rng, 0.5)) return WeightFn::power(uniform(rng, 0.3, 6.0)).shifted(xi);
  const double b = uniform(rng, 0.0, 3.0);
  if (coin(rng, 0.2)) return WeightFn::power_log(kInf, b + 0.1).shifted(uniform(rng, 0.05, 1.0));
  return WeightFn::power_log(uniform(rng, 0.3, 6.0), b).shifted(xi);
}

}  // namespace

CriterionResult verify_weight_class(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x09);
  std::vector<ReportRow> rows;

  std::size_t violations = 0, checked = 0;
  double worst = 0.0;
  std::string worst_params;
  for (std::size_t i = 0; i < 10000; ++i) {
    const WeightFn eta = random_weight(rng);
    const double t = std::exp2(uniform(rng, -60.0, 60.0));
    const int cutoff = uniform_int(rng, 0, 200);
    if (!eta.certified()) continue;
    ++checked;
    const GeometricSum g = geometric_sum_bound(eta, t, cutoff);
    const double excess = g.sum / g.bound;
    if (excess > worst) {
      worst = excess;
      worst_params = Params()("eta", eta.spec())("t", t)("J", cutoff);
    }
    if (g.sum > g.bound * (1 + 1e-14)) ++violations;
  }
  rows.push_back(make_row(id(9, "geometric_sum"), Params()("draws", 10000)("certified", checked)("worst", worst_params),
                          "violations", static_cast<double>(violations), 0.0, 0.0, violations == 0 && checked > 5000,
                          "sum_j eta(s0^j t) <= eta(t)/(1-delta)"));
  rows.push_back(make_row(id(9, "geometric_sum_ratio"), worst_params, "max_sum_over_bound", worst, kNaN, 1.0,
                          worst <= 1 + 1e-14, "sum_j eta(s0^j t) <= eta(t)/(1-delta)"));

  const std::vector<WeightFn> weights = {
      WeightFn::power(1.0),          WeightFn::power(2.0),          WeightFn::power(0.5).shifted(0.3),
      WeightFn::power(4.0),          WeightFn::power_log(2.0, 1.0), WeightFn::power_log(1.0, 2.5),
      WeightFn::power_log(3.0, 0.5), WeightFn::power_log(kInf, 1.0).shifted(0.5),
      WeightFn::power_log(1.5, 1.0).shifted(0.25),
  };
  for (std::size_t w = 0; w < weights.size(); ++w) {
    const WeightFn& eta = weights[w];
    const auto [c1, c2] = smoothed_weight_constants(eta);
    double lo = kInf, hi = 0.0;
    for (int e = -30; e <= 30; e += 2) {
      const double t = std::exp2(e);
      const double r = smoothed_weight(eta, t) / eta(t);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const std::string params = Params()("eta", eta.spec())("C1", c1)("C2", c2)("grid", "2^-30..2^30");
    rows.push_back(make_row(id(9, "smoothed_lower", w), params, "min_g_over_eta", lo, c1, kNaN, lo >= c1 * (1 - 1e-12),
                            "C1 eta <= g"));
    rows.push_back(make_row(id(9, "smoothed_upper", w), params, "max_g_over_eta", hi, c2, kNaN, hi <= c2 * (1 + 1e-12),
                            "g <= C2 eta"));
  }

  std::size_t index = 0;
  for (double p : {0.3, 0.5, 1.0, 2.0, 3.0, 7.5}) {
    for (double xi : {0.0, 0.25}) {
      const WeightFn eta = WeightFn::power(p).shifted(xi);
      const double expected = 1.0 / p + xi;
      const double index_value = boyd_lower_index(eta, 0.5);
      const double via_dilation = std::log(dilation_fn(eta, 0x1p-10)) / std::log(0x1p-10);
      const bool ok = index_value == expected && rel_err(via_dilation, expected) <= 1e-14;
      rows.push_back(make_row(id(9, "boyd", index++), Params()("eta", eta.spec())("via_dilation", via_dilation),
                              "boyd_lower_index", index_value, expected, 0.0, ok, "power family Boyd index 1/p"));
    }
  }
  return finish(9, "weight-class suite", std::move(rows), t0);
}

// 10 ---------------------------------------------------------------------

namespace {

struct NormUnderTest {
  std::string name;
  std::function<double(const CoeffSeq&)> norm;
  double rho = 1.0;       // 0 disables the triangle check
  std::string params;
};

// Pair (s, t) on overlapping supports and a sequence dominated by s.
struct Pair {
  CoeffSeq s, t, below;
};

Pair random_pair(std::mt19937_64& rng, int d, std::size_t n) {
  Pair p{random_sequence(rng, d, n, 3), CoeffSeq(d), CoeffSeq(d)};
  const CoeffSeq other = random_sequence(rng, d, n, 3);
  for (const auto& [q, v] : p.s) {
    if (coin(rng, 0.5)) p.t.set(q, v * uniform(rng, -2.0, 2.0));
    p.below.set(q, v * uniform(rng, 0.0, 1.0));
  }
  for (const auto& [q, v] : other)
    if (coin(rng, 0.5)) p.t.add(q, v);
  return p;
}

NormUnderTest random_norm(std::mt19937_64& rng, int kind, int d) {
  NormUnderTest n;
  const double mus[] = {0.4, 1.0, 2.5, kInf};
  switch (kind) {
    case 0: {
      SpaceParams f = random_space(rng, d, true);
      f.kind = SpaceKind::triebel_lizorkin;
      if (std::isinf(f.p)) f.p = 2.0;
      n.name = "tl";
      n.norm = [f](const CoeffSeq& s) { return tl_norm(s, f); };
      n.rho = f.rho();
      n.params = f.describe();
      break;
    }
    case 1: {
      SpaceParams f = random_space(rng, d, true);
      f.kind = SpaceKind::besov;
      n.name = "besov";
      n.norm = [f](const CoeffSeq& s) { return besov_norm(s, f); };
      n.rho = f.rho();
      n.params = f.describe();
      break;
    }
    case 2:
    case 3:
    case 4: {
      LorentzParams lp;
      lp.eta = kind == 2 ? WeightFn::power(uniform(rng, 0.3, 5.0)) : WeightFn::power_log(uniform(rng, 0.5, 5.0), uniform(rng, 0.0, 2.0));
      lp.mu = mus[uniform_int(rng, 0, 3)];
      lp.xi = coin(rng, 0.5) ? 0.0 : uniform(rng, 0.0, 1.0);
      const SpaceParams g = random_space(rng, d, false);
      lp.u = WeightSeq{g}.as_weighting();
      const MeasureSpec m{uniform(rng, -1.0, 2.0)};
      n.rho = lorentz_triangle_exponent(lp);
      if (kind == 4) {
        n.name = "lorentz_distribution";
        n.norm = [lp, m](const CoeffSeq& s) { return lorentz_norm_via_distribution(s, m, lp); };
      } else {
        n.name = kind == 2 ? "lorentz_power" : "lorentz_powerlog";
        n.norm = [lp, m](const CoeffSeq& s) { return lorentz_norm(s, m, lp); };
      }
      n.params = Params()("eta", lp.eta.spec())("mu", lp.mu)("xi", lp.xi)("alpha", m.alpha).space("u", g);
      break;
    }
    default: {
      ApproxParams ap;
      ap.f = random_space(rng, d, true);
      ap.nu = MeasureSpec{uniform(rng, -1.0, 2.0)};
      ap.xi = uniform(rng, 0.2, 1.5);
      ap.mu = mus[uniform_int(rng, 0, 3)];
      n.name = "approx_norm";
      n.norm = [ap](const CoeffSeq& s) { return approx_norm(s, ap, ap.f.additive() ? Solver::knapsack : Solver::brute); };
      n.rho = 0.0;
      n.params = Params().space("f", ap.f)("alpha", ap.nu.alpha)("xi", ap.xi)("mu", ap.mu);
      break;
    }
  }
  return n;
}

}  // namespace

CriterionResult verify_lattice_axioms(const VerifyConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(cfg.seed ^ 0x0a);
  constexpr double slack = 1e-12;
  constexpr std::size_t kPairs = 500;
  const char* names[] = {"tl", "besov", "lorentz_power", "lorentz_powerlog", "lorentz_distribution", "approx_norm"};
  std::vector<ReportRow> rows;
  for (int kind = 0; kind < 6; ++kind) {
    double homog = 0.0, mono = 0.0, tri = 0.0;
    std::string homog_at, mono_at, tri_at;
    for (std::size_t i = 0; i < kPairs; ++i) {
      const int d = uniform_int(rng, 1, 2);
      NormUnderTest nt = random_norm(rng, kind, d);
      const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, kind == 5 ? 7 : 24));
      const Pair p = random_pair(rng, d, n);
      const double c = std::pow(10.0, uniform(rng, -3.0, 3.0)) * (coin(rng, 0.5) ? 1 : -1);
      const double ns = nt.norm(p.s);

      const double h = std::abs(nt.norm(p.s.scaled(c)) - std::abs(c) * ns) / (std::abs(c) * ns);
      if (h > homog) {
        homog = h;
        homog_at = nt.params;
      }
      const double m = nt.norm(p.below) / ns - 1.0;
      if (m > mono) {
        mono = m;
        mono_at = nt.params;
      }
      if (nt.rho > 0.0) {
        const double nt_ = nt.norm(p.t);
        const double lhs = std::pow(nt.norm(p.s + p.t), nt.rho);
        const double rhs = std::pow(ns, nt.rho) + std::pow(nt_, nt.rho);
        const double v = lhs / rhs - 1.0;
        if (v > tri) {
          tri = v;
          tri_at = Params()(nt.params, "")("rho", nt.rho);
        }
      }
    }
    const std::string base = Params()("pairs", kPairs)("seed", cfg.seed);
    rows.push_back(make_row(id(10, std::string(names[kind]) + ".homogeneity"), base + " worst=" + homog_at,
                            "max_rel_dev", homog, 0.0, slack, homog <= slack, "||c s|| = |c| ||s||"));
    rows.push_back(make_row(id(10, std::string(names[kind]) + ".monotonicity"), base + " worst=" + mono_at,
                            "max_excess", mono, 0.0, slack, mono <= slack, "|s| <= |t| implies ||s|| <= ||t||"));
    if (kind != 5)
      rows.push_back(make_row(id(10, std::string(names[kind]) + ".rho_triangle"), base + " worst=" + tri_at,
                              "max_excess", tri, 0.0, slack, tri <= slack,
                              "||s+t||^rho <= ||s||^rho + ||t||^rho"));
  }
  return finish(10, "lattice axioms", std::move(rows), t0);
}

// -----------------------------------------------------------------------

const std::vector<CriterionFn>& all_criteria() {
  static const std::vector<CriterionFn> fns = {
      verify_atom_norms,          verify_democracy_closed_forms, verify_admissibility,   verify_lorentz_besov,
      verify_sigma_oracle,        verify_approx_norm_forms,      verify_jackson_bernstein, verify_representation,
      verify_weight_class,        verify_lattice_axioms,
  };
  return fns;
}

std::vector<CriterionResult> verify_all(const VerifyConfig& cfg) {
  std::vector<CriterionResult> out;
  for (const auto& fn : all_criteria()) out.push_back(fn(cfg));
  return out;
}

}  // namespace rna
