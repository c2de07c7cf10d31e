#include "rna/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "rna/approx.hpp"
#include "rna/democracy.hpp"
#include "rna/errors.hpp"
#include "rna/lorentz.hpp"
#include "rna/spaces.hpp"
#include "rna/verify.hpp"

namespace rna {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kExpTol = 1e-10;

// key=value echo with 17 significant digits, so every row can be replayed.
class Echo {
public:
  Echo() { os_.precision(17); }
  explicit Echo(const std::string& base) : Echo() {
    os_ << base;
    first_ = base.empty();
  }
  template <class T>
  Echo& operator()(const std::string& key, const T& value) {
    if (!first_) os_ << ' ';
    first_ = false;
    os_ << key << '=' << value;
    return *this;
  }
  Echo& space(const std::string& key, const SpaceParams& f) { return (*this)(key, f.describe()); }
  std::string str() const { return os_.str(); }

private:
  std::ostringstream os_;
  bool first_ = true;
};

std::string row_id(const std::string& name, std::size_t index = std::string::npos) {
  if (index == std::string::npos) return name;
  char buf[32];
  std::snprintf(buf, sizeof buf, "/%04zu", index);
  return name + buf;
}

ReportRow row(std::string experiment, std::string params, std::string quantity, double value,
              double expected = kNaN, double tolerance = kNaN, bool pass = true, std::string anchor = {}) {
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

bool close_rel(double value, double expected, double tol) {
  if (expected == 0.0) return value == 0.0;
  return std::abs(value - expected) <= tol * std::abs(expected);
}

// Shared keys --------------------------------------------------------------

const ConfigKey kSeed{"seed", "u64, default 20240917; --seed overrides"};
const ConfigKey kDim{"dim", "int in [1, 8], default 1"};
const ConfigKey kInput{"input", "path to a coefficient file, lines `j k1 [k2 ...] value`"};
const ConfigKey kAlpha{"alpha", "measure exponent, nu(Q) = |Q|^alpha, default 1"};
const ConfigKey kSolver{"solver", "auto | brute | knapsack | greedy, default auto"};
const ConfigKey kSpace{"space", "error space, e.g. tl:s=0,p=2,q=2 or besov:s=0.5,p=1,q=inf"};

int dim_of(const Config& c) { return static_cast<int>(c.integer("dim", 1, 1, 8)); }

CoeffSeq load_sequence(const Config& c, int dim) {
  const auto path = c.path("input");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input " + path.string(), 0);
  return read_coeff_seq(in, dim);
}

Solver solver_of(const Config& c, const SpaceParams& f, std::size_t n) {
  const std::string name = c.text("solver", "auto");
  if (name == "auto") return default_solver(f, n);
  try {
    return parse_solver(name);
  } catch (const std::exception&) {
    throw ConfigError("'solver' must be auto, brute, knapsack or greedy, got " + name, 0);
  }
}

ApproxParams approx_of(const Config& c, int dim, const std::string& xi_key, const std::string& mu_key,
                       const std::string& space_key) {
  ApproxParams ap;
  ap.f = c.space(space_key, "tl:s=0,p=2,q=2", dim);
  ap.nu = MeasureSpec{c.number("alpha", 1.0, -8.0, 8.0)};
  ap.xi = c.number(xi_key, 1.0, 1e-6, 16.0);
  ap.mu = c.number(mu_key, 1.0, 1e-3, kInf);
  return ap;
}

// norm ---------------------------------------------------------------------

std::vector<ReportRow> run_norm(const Config& c, std::uint64_t) {
  const int dim = dim_of(c);
  const double s = c.number("s", 0.0, -64.0, 64.0);
  const double p = c.number("p", 2.0, 1e-3, kInf);
  const double q = c.number("q", 2.0, 1e-3, kInf);
  if (std::isinf(p)) throw ConfigError("'p' must be finite (Triebel-Lizorkin needs p < inf)", 0);
  const SpaceParams tl = SpaceParams::tl(s, p, q, dim);
  const SpaceParams besov = SpaceParams::besov(s, p, q, dim);

  LorentzParams lp;
  lp.eta = c.weight("lorentz.eta", "power:p=2");
  lp.mu = c.number("lorentz.mu", 2.0, 1e-3, kInf);
  lp.xi = c.number("lorentz.xi", 0.0, 0.0, 16.0);
  std::optional<SpaceParams> u_space;
  if (c.has("lorentz.u")) {
    u_space = c.space("lorentz.u", dim);
    lp.u = WeightSeq{*u_space}.as_weighting();
  }
  const MeasureSpec nu{c.number("alpha", 1.0, -8.0, 8.0)};
  ApproxParams ap = approx_of(c, dim, "approx.xi", "approx.mu", "approx.space");
  if (!c.has("approx.space")) ap.f = tl;
  lp.validate();
  ap.validate();

  const CoeffSeq seq = load_sequence(c, dim);
  const Solver solver = solver_of(c, ap.f, seq.size());

  // Closed forms exist for the empty sequence and for a single atom c e_Q.
  double e_tl = kNaN, e_besov = kNaN, e_lorentz = kNaN, e_approx = kNaN;
  if (seq.empty()) {
    e_tl = e_besov = e_lorentz = e_approx = 0.0;
  } else if (seq.size() == 1) {
    const auto& [cube, value] = *seq.begin();
    const double a = std::abs(value);
    e_tl = a * atom_norm(cube, tl);
    e_besov = a * atom_norm(cube, besov);
    const double mass = nu(cube);
    const WeightFn w = lp.combined();
    if (w.family() == WeightFamily::power) {
      const double ua = a * (u_space ? atom_norm(cube, *u_space) : 1.0);
      const double e = w.exponent();
      e_lorentz = ua * std::pow(mass, e) * (std::isinf(lp.mu) ? 1.0 : std::pow(e * lp.mu, -1.0 / lp.mu));
    }
    e_approx = a * atom_norm(cube, ap.f) * std::pow(mass, ap.xi) *
               (std::isinf(ap.mu) ? 1.0 : std::pow(ap.xi * ap.mu, -1.0 / ap.mu));
  }

  const std::string input = c.text("input");
  std::vector<ReportRow> rows;
  auto push = [&](const std::string& name, const std::string& params, double value, double expected,
                  const std::string& anchor) {
    const bool has_expected = !std::isnan(expected);
    rows.push_back(row("norm." + name, params, "norm", value, expected, has_expected ? kExpTol : kNaN,
                       !has_expected || close_rel(value, expected, kExpTol), anchor));
  };
  const std::string base = Echo()("input", input)("n", seq.size()).str();
  push("tl", Echo(base).space("f", tl).str(), tl_norm(seq, tl), e_tl, "atom norm |Q|^(-s/d+1/p-1/2)");
  push("besov", Echo(base).space("f", besov).str(), besov_norm(seq, besov), e_besov,
       "atom norm |Q|^(-s/d+1/p-1/2)");
  push("lorentz",
       Echo(base)("eta", lp.eta.spec())("mu", lp.mu)("xi", lp.xi)("alpha", nu.alpha)(
           "u", u_space ? u_space->describe() : "1")
           .str(),
       lorentz_norm(seq, nu, lp), e_lorentz, "single atom: u|c| nu^a (a mu)^(-1/mu)");
  push("approx",
       Echo(base).space("f", ap.f)("alpha", ap.nu.alpha)("xi", ap.xi)("mu", ap.mu)("solver", to_string(solver))
           .str(),
       approx_norm(seq, ap, solver), e_approx, "single atom: |c| ||e_Q|| nu(Q)^xi (xi mu)^(-1/mu)");
  return rows;
}

// sigma --------------------------------------------------------------------

std::vector<ReportRow> run_sigma(const Config& c, std::uint64_t) {
  const int dim = dim_of(c);
  ApproxParams ap = approx_of(c, dim, "xi", "mu", "space");
  ap.validate();
  const CoeffSeq seq = load_sequence(c, dim);
  const Solver solver = solver_of(c, ap.f, seq.size());
  std::vector<double> budgets = c.numbers("budgets", {}, 0.0, 1e300);
  const std::string base = Echo()("input", c.text("input")).space("f", ap.f)("alpha", ap.nu.alpha)(
                               "solver", to_string(solver))
                               .str();
  std::vector<ReportRow> rows;
  if (budgets.empty()) {
    // Whole profile: one row per step.
    const SigmaProfile prof = sigma_profile(seq, ap, solver);
    for (std::size_t i = 0; i < prof.errors.size(); ++i) {
      const bool monotone = i == 0 || prof.errors[i] <= prof.errors[i - 1];
      rows.push_back(row(row_id("sigma.profile", i), Echo(base)("budget", prof.breakpoints[i]).str(), "sigma",
                         prof.errors[i], kNaN, kNaN, monotone, "sigma nonincreasing in the budget"));
    }
    return rows;
  }
  std::sort(budgets.begin(), budgets.end());
  double previous = kInf;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const Approximation a = solver == Solver::greedy ? sigma_greedy(seq, budgets[i], ap, density_weighting(ap))
                                                     : sigma_exact(seq, budgets[i], ap, solver);
    const bool fits = a.mass <= budgets[i] * (1 + 1e-12);
    const bool monotone = solver == Solver::greedy || a.error <= previous;
    previous = a.error;
    rows.push_back(row(row_id("sigma.budget", i),
                       Echo(base)("budget", budgets[i])("kept", a.support.size())("mass", a.mass)(
                           "certified", a.certified_optimal ? "true" : "false")
                           .str(),
                       "sigma", a.error, kNaN, kNaN, fits && monotone,
                       "support within budget; sigma nonincreasing in the budget"));
  }
  return rows;
}

// approx-norm --------------------------------------------------------------

std::vector<ReportRow> run_approx_norm(const Config& c, std::uint64_t) {
  const int dim = dim_of(c);
  ApproxParams ap = approx_of(c, dim, "xi", "mu", "space");
  ap.validate();
  const CoeffSeq seq = load_sequence(c, dim);
  const Solver solver = solver_of(c, ap.f, seq.size());
  const std::string base = Echo()("input", c.text("input")).space("f", ap.f)("alpha", ap.nu.alpha)("xi", ap.xi)(
                               "mu", ap.mu)("solver", to_string(solver))
                               .str();
  const SigmaProfile prof = sigma_profile(seq, ap, solver);
  const double integral = approx_norm(prof, ap.xi, ap.mu);
  const double dyadic = approx_norm_dyadic(prof, ap.xi, ap.mu);
  std::vector<ReportRow> rows;
  rows.push_back(row("approx_norm.integral", base, "approx_norm", integral));
  const double factor = std::exp2(ap.xi);
  const double ratio = integral == 0.0 ? 1.0 : dyadic / integral;
  rows.push_back(row("approx_norm.dyadic", base, "dyadic_over_integral", ratio, 1.0, factor,
                     ratio >= (1 - 1e-12) / factor && ratio <= factor * (1 + 1e-12),
                     "dyadic form within [2^-xi, 2^xi] of the integral form"));
  if (solver != Solver::greedy) {
    const Decomposition dec = decompose(seq, ap, solver);
    CoeffSeq sum(dim);
    bool budgets_ok = true;
    for (const auto& piece : dec.pieces) {
      sum = sum + piece.piece;
      budgets_ok = budgets_ok && nu_measure(piece.piece.support(), ap.nu) <= std::ldexp(1.0, piece.k) * (1 + 1e-12);
    }
    rows.push_back(row("decomposition.reconstruct", Echo(base)("pieces", dec.pieces.size()).str(), "exact_sum",
                       sum == seq, 1.0, 0.0, sum == seq, "representation reconstructs s coefficient-wise"));
    rows.push_back(row("decomposition.budget", base, "pieces_within_budget", budgets_ok, 1.0, 0.0, budgets_ok,
                       "piece s_k supported on mass <= 2^k"));
    const auto [lo, hi] = representation_bounds(ap.xi, ap.mu, ap.f.rho());
    const double score_ratio = integral == 0.0 ? lo : dec.score / integral;
    rows.push_back(row("decomposition.score", Echo(base)("score", dec.score)("lo", lo)("hi", hi).str(),
                       "score_over_approx_norm", score_ratio, kNaN, kNaN,
                       score_ratio >= lo * (1 - 1e-12) && score_ratio <= hi * (1 + 1e-12),
                       "score within two-sided bound of approx norm"));
  }
  return rows;
}

// democracy ----------------------------------------------------------------

FamilyKind family_of(const std::string& name) {
  if (name == "grid") return FamilyKind::disjoint_grid;
  if (name == "tower") return FamilyKind::tower;
  if (name == "row") return FamilyKind::shifted_row;
  if (name == "random") return FamilyKind::random_mixed;
  throw ConfigError("'families' entries must be grid, tower, row or random, got " + name, 0);
}

DemocracyCase case_of(const Config& c, int dim) {
  DemocracyCase dc;
  dc.f1 = c.space("f1", dim);
  dc.f2 = c.space("f2", dim);
  if (dc.f1.kind != SpaceKind::triebel_lizorkin) throw ConfigError("'f1' must be a tl: space", 0);
  // Snap away rounding from decimal inputs, so alpha = 1 cases hit exactly 1.
  dc.alpha = std::round(dc.predicted_alpha() * 1e12) / 1e12 + c.number("alpha_offset", 0.0, -8.0, 8.0);
  if (const auto a = c.maybe_number("alpha", -8.0, 8.0)) {
    if (c.has("alpha_offset")) throw ConfigError("give either 'alpha' or 'alpha_offset'", 0);
    dc.alpha = *a;
  }
  dc.validate();
  return dc;
}

std::vector<ReportRow> run_democracy(const Config& c, std::uint64_t seed) {
  const int dim = dim_of(c);
  const DemocracyCase dc = case_of(c, dim);
  SweepSpec spec;
  for (const std::string& name : c.words("families", {"grid", "tower", "row"})) spec.families.push_back(family_of(name));
  spec.sizes = c.integers("sizes", {1, 2, 4, 8}, 1, 1 << 20);
  for (auto l : c.integers("grid_log_sides", {0, 1, 2}, 0, 20)) spec.grid_log_sides.push_back(static_cast<int>(l));
  spec.random_scale_range = static_cast<int>(c.integer("random_scale_range", 4, 0, 20));
  spec.random_draws = static_cast<std::size_t>(c.integer("random_draws", 20, 1, 100000));
  spec.seed = seed;
  for (FamilyKind k : spec.families) {
    for (auto n : spec.sizes) {
      if (k == FamilyKind::disjoint_grid && std::pow(static_cast<double>(n), dim) > 1 << 22)
        throw ConfigError("grid with N^d > 2^22 cubes", 0);
      if (k == FamilyKind::random_mixed && n > 4096) throw ConfigError("random sets above 4096 cubes", 0);
    }
  }

  const std::string base = Echo().space("f1", dc.f1).space("f2", dc.f2)("alpha", dc.alpha).str();
  std::vector<ReportRow> rows;
  const Admissibility adm = predicted_admissible(dc);
  rows.push_back(row("democracy.admissible", Echo(base)("predicted_alpha", dc.predicted_alpha()).str() +
                                                  " reason=" + adm.reason,
                     "admissible", adm.admissible, kNaN, kNaN, true, "admissible iff alpha = p1((s2-s1)/d-1/p2)+1"));

  const auto sweep = democracy_ratio_sweep(dc, spec);
  const double inv_p1 = 1.0 / dc.f1.p;
  std::size_t index = 0;
  std::vector<DemocracyRow> randoms;
  for (const DemocracyRow& r : sweep) {
    const std::string fam = to_string(r.family);
    const std::string params = Echo(base)("family", fam)("N", r.n)("l", r.l).str();
    const std::string name = row_id("democracy." + fam, index++);
    double e_value = kNaN, e_mass = kNaN;
    std::string anchor;
    switch (r.family) {
      case FamilyKind::disjoint_grid:
        e_value = disjoint_grid_closed_form(dc, r.n, static_cast<int>(r.l));
        e_mass = disjoint_grid_mass(dc, r.n, static_cast<int>(r.l));
        anchor = "grid: L^(d(gamma/q1+1/p1)) N^(d/p1), mass (L^alpha N)^d";
        break;
      case FamilyKind::shifted_row:
        e_value = std::pow(static_cast<double>(r.n), inv_p1);
        e_mass = static_cast<double>(r.n);
        anchor = "shifted row: N^(1/p1)";
        break;
      case FamilyKind::tower:
        // Checked against forest integration while the tower is enumerable.
        if ((r.n - 1) * dim <= 12) e_value = democracy_value(tower(dim, static_cast<int>(r.n)), dc);
        if (dc.alpha == 1.0) e_mass = static_cast<double>(r.n);
        anchor = "tower: level-wise value equals forest integration";
        break;
      case FamilyKind::random_mixed:
        randoms.push_back(r);
        break;
    }
    const bool v_ok = std::isnan(e_value) || close_rel(r.value, e_value, 1e-9);
    const bool m_ok = std::isnan(e_mass) || close_rel(r.mass, e_mass, 1e-9);
    rows.push_back(row(name + ".value", params, "value", r.value, e_value, std::isnan(e_value) ? kNaN : 1e-9, v_ok,
                       anchor));
    rows.push_back(row(name + ".mass", params, "nu_alpha", r.mass, e_mass, std::isnan(e_mass) ? kNaN : 1e-9, m_ok,
                       anchor));
    rows.push_back(row(name + ".ratio", params, "value_over_mass^(1/p1)", r.ratio));
  }
  if (!randoms.empty())
    rows.push_back(row("democracy.random_spread",
                       Echo(base)("sets", randoms.size())("J", spec.random_scale_range)("seed", seed).str(),
                       "max_over_min_ratio", ratio_spread(randoms)));

  // alpha = 1: tower against row spread grows like N^|1/q1-1/p1|.
  const bool has_tower = std::count(spec.families.begin(), spec.families.end(), FamilyKind::tower) > 0;
  const bool has_row = std::count(spec.families.begin(), spec.families.end(), FamilyKind::shifted_row) > 0;
  if (dc.alpha == 1.0 && has_tower && has_row && spec.sizes.size() >= 2) {
    std::vector<double> ns, spreads;
    for (auto n : spec.sizes) {
      SweepSpec both{{FamilyKind::tower, FamilyKind::shifted_row}, {n}};
      ns.push_back(static_cast<double>(n));
      spreads.push_back(ratio_spread(democracy_ratio_sweep(dc, both)));
    }
    const double slope = loglog_slope(ns, spreads);
    const double expected = std::abs((std::isinf(dc.f1.q) ? 0.0 : 1.0 / dc.f1.q) - inv_p1);
    rows.push_back(row("democracy.divergence_exponent", Echo(base)("sizes", spec.sizes.size()).str(),
                       "fitted_exponent", slope, expected, 0.05, std::abs(slope - expected) <= 0.05,
                       "tower vs shifted row spread grows like N^|1/q1-1/p1|"));
  }
  return rows;
}

// jackson / bernstein ------------------------------------------------------

std::vector<ReportRow> constant_rows(const std::string& kind, const Config& c, std::uint64_t seed) {
  const int dim = dim_of(c);
  const DemocracyCase dc = case_of(c, dim);
  const double xi = c.number("xi", 0.5, 1e-3, 8.0);
  std::vector<std::size_t> sizes;
  for (auto n : c.integers("sizes", {16, 32, 64}, 1, 256)) sizes.push_back(static_cast<std::size_t>(n));
  const bool control = c.flag("indicator", false);
  const auto per_size = static_cast<std::size_t>(c.integer("per_size", 8, 1, 1000));
  const int J = static_cast<int>(c.integer("scale_range", 4, 0, 12));
  const double drift_limit = c.number("drift_limit", 4.0, 1.0, 1e6);
  if (control && dim != 1) throw ConfigError("'indicator = true' needs dim = 1", 0);

  ConstantSeries series;
  if (kind == "jackson")
    series = control ? jackson_indicator_series(dc, xi, sizes) : jackson_series(dc, xi, sizes, per_size, J, seed);
  else
    series = control ? bernstein_indicator_series(dc, xi, sizes) : bernstein_series(dc, xi, sizes, per_size, J, seed);

  const bool admissible = predicted_admissible(dc).admissible;
  const std::string base =
      Echo().space("f1", dc.f1).space("f2", dc.f2)("alpha", dc.alpha)("xi", xi)(
                "suite", control ? std::string("indicator") : "random")("per_size", per_size)("J", J)("seed", seed)
          .str();
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < series.sizes.size(); ++i)
    rows.push_back(row(row_id(kind + ".constant", i), Echo(base)("size", series.sizes[i]).str(), "constant",
                       series.constants[i], kNaN, kNaN, std::isfinite(series.constants[i]), "constant finite"));
  if (series.constants.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(series.constants.begin(), series.constants.end());
    const double drift = *hi / *lo;
    if (admissible) {
      rows.push_back(row(kind + ".drift", base, "max_over_min", drift, kNaN, drift_limit, drift < drift_limit,
                         "admissible: constant stable across support sizes"));
    } else {
      bool increasing = true;
      for (std::size_t i = 1; i < series.constants.size(); ++i)
        increasing = increasing && series.constants[i] > series.constants[i - 1];
      rows.push_back(row(kind + ".growth", base, "max_over_min", drift, kNaN, kNaN, increasing,
                         "inadmissible: constant grows with the support size"));
    }
  }
  return rows;
}

// lorentz-besov ------------------------------------------------------------

std::vector<ReportRow> run_lorentz_besov(const Config& c, std::uint64_t seed) {
  const int dim = dim_of(c);
  const double s1 = c.number("s1", 0.0, -16.0, 16.0);
  const double p1 = c.number("p1", 2.0, 1e-3, 1e6);
  const SpaceParams f2 = c.space("f2", "tl:s=1,p=2,q=2", dim);
  const std::vector<double> taus = c.numbers("tau", {0.5, 1.0, 1.7, 3.0}, 1e-3, 1e6);
  std::vector<std::pair<std::string, CoeffSeq>> inputs;
  if (c.has("input")) {
    inputs.emplace_back(c.text("input"), load_sequence(c, dim));
  } else {
    const auto draws = c.integer("draws", 10, 1, 10000);
    const auto n = c.integer("support", 12, 1, 4096);
    const int J = static_cast<int>(c.integer("scale_range", 4, 0, 20));
    std::mt19937_64 rng(seed);
    for (std::int64_t i = 0; i < draws; ++i)
      inputs.emplace_back(Echo()("random", i)("n", n)("J", J)("seed", seed).str(),
                          random_sequence(rng, dim, static_cast<std::size_t>(n), J));
  }
  std::vector<ReportRow> rows;
  std::size_t index = 0;
  for (const auto& [label, seq] : inputs) {
    for (double tau : taus) {
      const LorentzBesovCheck chk = lorentz_equals_besov_check(seq, s1, p1, f2, tau);
      rows.push_back(row(row_id("lorentz_besov", index++),
                         Echo()("source", label)("s1", s1)("p1", p1).space("f2", f2)("tau", tau)("alpha", chk.alpha)(
                             "gamma", chk.gamma)
                             .str(),
                         "lorentz_norm", chk.lhs, chk.rhs, 1e-10, chk.ok,
                         "l^{tau,tau}(u, nu_alpha) = b^gamma_{tau,tau} with equal quasi-norms"));
    }
  }
  return rows;
}

// verify-all ---------------------------------------------------------------

std::vector<ReportRow> run_verify_all(const Config& c, std::uint64_t seed) {
  VerifyConfig vc;
  vc.seed = seed;
  vc.alpha_offset = c.number("alpha_offset", 0.0, -2.0, 2.0);
  const auto& all = all_criteria();
  std::vector<std::int64_t> ids(all.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(i + 1);
  ids = c.integers("criteria", ids, 1, static_cast<std::int64_t>(all.size()));
  std::vector<ReportRow> rows;
  for (auto id : ids) {
    CriterionResult r = all[static_cast<std::size_t>(id - 1)](vc);
    char name[32];
    std::snprintf(name, sizeof name, "c%02d.summary", r.id);
    ReportRow summary = row(name, Echo()("title", r.title)("rows", r.rows.size())("seed", seed).str(), "pass",
                            r.pass, 1.0, 0.0, r.pass, r.title);
    summary.wall_ms = r.wall_ms;
    rows.push_back(std::move(summary));
    for (auto& x : r.rows) rows.push_back(std::move(x));
  }
  return rows;
}

std::vector<ConfigKey> with_common(std::vector<ConfigKey> keys) {
  keys.insert(keys.begin(), {kSeed, kDim});
  return keys;
}

std::vector<ConfigKey> case_keys(std::vector<ConfigKey> extra) {
  std::vector<ConfigKey> keys = {
      {"f1", "Triebel-Lizorkin error space, tl:s=..,p=..,q=.. (required)"},
      {"f2", "normalisation space u_Q = ||e_Q||_f2 (required)"},
      {"alpha", "measure exponent; default the predicted admissible value"},
      {"alpha_offset", "added to the predicted alpha, default 0"},
  };
  keys.insert(keys.end(), extra.begin(), extra.end());
  return with_common(keys);
}

}  // namespace

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> cmds = {
      {"norm",
       "tl, besov, Lorentz and approximation norms of a coefficient file",
       with_common({kInput,
                    {"s", "smoothness, default 0"},
                    {"p", "finite p > 0, default 2"},
                    {"q", "q > 0 or inf, default 2"},
                    kAlpha,
                    {"lorentz.eta", "weight, power:p=2 (default) or powerlog:p=2,b=1"},
                    {"lorentz.mu", "(0, inf], default 2"},
                    {"lorentz.xi", "shift t^xi, default 0"},
                    {"lorentz.u", "optional space, u_Q = ||e_Q|| in it; default u = 1"},
                    {"approx.space", "error space of the approximation norm, default the tl space above"},
                    {"approx.xi", "rate > 0, default 1"},
                    {"approx.mu", "(0, inf], default 1"},
                    kSolver}),
       run_norm},
      {"sigma",
       "restricted approximation error at given budgets, or its whole profile",
       with_common({kInput, kSpace, kAlpha, kSolver,
                    {"budgets", "comma list of budgets t >= 0; omitted: every profile step"}}),
       run_sigma},
      {"approx-norm",
       "integral and dyadic approximation norms plus the dyadic representation",
       with_common({kInput, kSpace, kAlpha, kSolver, {"xi", "rate > 0, default 1"}, {"mu", "(0, inf], default 1"}}),
       run_approx_norm},
      {"democracy",
       "democracy ratios over grid, tower, row and random cube families",
       case_keys({{"families", "comma list of grid, tower, row, random; default grid,tower,row"},
                  {"sizes", "comma list of N, default 1,2,4,8"},
                  {"grid_log_sides", "comma list of log2 L for grids, default 0,1,2"},
                  {"random_scale_range", "J for random sets, default 4"},
                  {"random_draws", "random sets per size, default 20"}}),
       run_democracy},
      {"jackson",
       "empirical Jackson constants across support sizes",
       case_keys({{"xi", "rate, default 0.5"},
                  {"sizes", "support sizes, default 16,32,64"},
                  {"per_size", "random sequences per size, default 8"},
                  {"scale_range", "cube scales in [-J, J], default 4"},
                  {"indicator", "true: single indicator of Gamma_{N,1/N} (d = 1) instead of random suites"},
                  {"drift_limit", "admissible cases pass when max/min constant < this, default 4"}}),
       [](const Config& c, std::uint64_t seed) { return constant_rows("jackson", c, seed); }},
      {"bernstein",
       "empirical Bernstein constants across support sizes",
       case_keys({{"xi", "rate, default 0.5"},
                  {"sizes", "support sizes, default 16,32,64"},
                  {"per_size", "random sequences per size, default 8"},
                  {"scale_range", "cube scales in [-J, J], default 4"},
                  {"indicator", "true: single indicator of Gamma_{N,1/N} (d = 1) instead of random suites"},
                  {"drift_limit", "admissible cases pass when max/min constant < this, default 4"}}),
       [](const Config& c, std::uint64_t seed) { return constant_rows("bernstein", c, seed); }},
      {"lorentz-besov",
       "Lorentz norm against the matching Besov norm",
       with_common({{"input", "optional coefficient file; omitted: random draws"},
                    {"s1", "smoothness of f1, default 0"},
                    {"p1", "p of f1, default 2"},
                    {"f2", "normalisation space, default tl:s=1,p=2,q=2"},
                    {"tau", "comma list, default 0.5,1,1.7,3"},
                    {"draws", "random sequences when no input, default 10"},
                    {"support", "cubes per random sequence, default 12"},
                    {"scale_range", "cube scales in [-J, J], default 4"}}),
       run_lorentz_besov},
      {"verify-all",
       "every acceptance suite; exit 1 when any row fails",
       with_common({{"alpha_offset", "added to every democracy alpha; nonzero is a negative control"},
                    {"criteria", "comma list of suite numbers, default all"}}),
       run_verify_all},
  };
  return cmds;
}

const Subcommand* find_subcommand(const std::string& name) {
  for (const auto& cmd : subcommands())
    if (cmd.name == name) return &cmd;
  return nullptr;
}

std::vector<ReportRow> run_subcommand(const Subcommand& cmd, const Config& config, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ReportRow> rows = cmd.run(config, seed);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : rows)
    if (r.wall_ms == 0.0) r.wall_ms = ms;
  sort_rows(rows);
  return rows;
}

}  // namespace rna
