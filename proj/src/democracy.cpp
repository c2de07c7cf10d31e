#include "rna/democracy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rna/errors.hpp"

namespace rna {

namespace {

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += x;
  return total;
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

double DemocracyCase::predicted_alpha() const {
  return f1.p * ((f2.s - f1.s) / f1.d - inv(f2.p)) + 1.0;
}

double DemocracyCase::coefficient_exponent() const { return (f2.s - f1.s) / f1.d - inv(f2.p); }

void DemocracyCase::validate() const {
  f1.validate();
  f2.validate();
  if (f1.kind != SpaceKind::triebel_lizorkin) throw ContractViolation("democracy needs a Triebel-Lizorkin f1");
  if (f1.d != f2.d) throw ContractViolation("f1 and f2 must share the dimension");
  if (std::isinf(f1.p)) throw ContractViolation("democracy needs p1 < inf");
  if (!std::isfinite(alpha)) throw ContractViolation("alpha must be finite");
}

Admissibility predicted_admissible(const DemocracyCase& c) {
  c.validate();
  const double predicted = c.predicted_alpha();
  std::ostringstream os;
  os.precision(17);
  // The tolerance only absorbs rounding in alpha given as a decimal literal.
  if (std::abs(c.alpha - predicted) > 1e-12 * std::max(1.0, std::abs(predicted))) {
    os << "alpha = " << c.alpha << " differs from p1((s2-s1)/d - 1/p2) + 1 = " << predicted;
    return {false, os.str()};
  }
  if (std::abs(c.alpha - 1.0) > 1e-12) {
    os << "alpha = " << c.alpha << " matches the predicted value and alpha != 1";
    return {true, os.str()};
  }
  if (c.f1.p == c.f1.q) return {true, "alpha = 1 with (s2-s1)/d = 1/p2 and p1 = q1"};
  os << "alpha = 1 forces p1 = q1, got p1 = " << c.f1.p << ", q1 = " << c.f1.q;
  return {false, os.str()};
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::disjoint_grid: return "grid";
    case FamilyKind::tower: return "tower";
    case FamilyKind::shifted_row: return "row";
    case FamilyKind::random_mixed: return "random";
  }
  return "?";
}

CubeSet disjoint_grid(int d, std::int64_t n, int l) {
  if (d < 1 || n < 1) throw ContractViolation("grid needs d >= 1 and N >= 1");
  CubeSet out(d);
  std::vector<std::int64_t> k(static_cast<std::size_t>(d), 0);
  for (;;) {
    out.insert(DyadicCube(-l, k));
    std::size_t i = 0;
    while (i < k.size() && ++k[i] == n) k[i++] = 0;
    if (i == k.size()) break;
  }
  return out;
}

CubeSet tower(int d, int n) {
  if (d < 1 || n < 1) throw ContractViolation("tower needs d >= 1 and N >= 1");
  if (static_cast<long>(n - 1) * d > 24) throw CapabilityError("tower too large to enumerate; use tower_value");
  CubeSet out(d);
  for (int j = 0; j < n; ++j) {
    const std::int64_t side = std::int64_t{1} << j;
    std::vector<std::int64_t> k(static_cast<std::size_t>(d), 0);
    for (;;) {
      out.insert(DyadicCube(j, k));
      std::size_t i = 0;
      while (i < k.size() && ++k[i] == side) k[i++] = 0;
      if (i == k.size()) break;
    }
  }
  return out;
}

CubeSet shifted_row(int d, std::int64_t n) {
  if (d < 1 || n < 1) throw ContractViolation("row needs d >= 1 and N >= 1");
  CubeSet out(d);
  for (std::int64_t j = 0; j < n; ++j) {
    std::vector<std::int64_t> k(static_cast<std::size_t>(d), 0);
    k[0] = j;
    out.insert(DyadicCube(0, k));
  }
  return out;
}

CubeSet random_mixed(int d, std::size_t n, int J, std::mt19937_64& rng) {
  if (d < 1 || J < 0 || J > 20) throw ContractViolation("random family needs d >= 1 and 0 <= J <= 20");
  std::uniform_int_distribution<int> scale(-J, J);
  CubeSet out(d);
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 1000 * n + 1000) throw ContractViolation("random family: too few distinct cubes in the window");
    const int j = scale(rng);
    std::uniform_int_distribution<std::int64_t> position(0, (std::int64_t{1} << (J + j)) - 1);
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    for (auto& x : k) x = position(rng);
    out.insert(DyadicCube(j, std::move(k)));
  }
  return out;
}

double democracy_value(const CubeSet& gamma, const DemocracyCase& c) {
  c.validate();
  if (gamma.dim() != c.f1.d) throw ContractViolation("cube set dimension does not match d");
  if (gamma.empty()) return 0.0;
  const double beta = c.coefficient_exponent();
  std::vector<std::pair<DyadicCube, double>> terms;
  terms.reserve(gamma.size());
  if (std::isinf(c.f1.q)) {
    for (const auto& q : gamma) terms.emplace_back(q, checked_exp2(beta * q.log2_volume()));
    return integrate_power_of_cube_max(terms, c.f1.p, c.f1.p);
  }
  for (const auto& q : gamma) terms.emplace_back(q, checked_exp2(beta * c.f1.q * q.log2_volume()));
  return integrate_power_of_cube_sum(terms, c.f1.p / c.f1.q, c.f1.p);
}

double disjoint_grid_closed_form(const DemocracyCase& c, std::int64_t n, int l) {
  c.validate();
  const double d = c.f1.d;
  const double beta = c.coefficient_exponent();
  const double inv_p = 1.0 / c.f1.p;
  // gamma/q1 = beta, also for q1 = inf.
  return std::exp2(l * d * (beta + inv_p)) * std::pow(static_cast<double>(n), d * inv_p);
}

double disjoint_grid_mass(const DemocracyCase& c, std::int64_t n, int l) {
  // One rounding of 2^{alpha l d}, as nu_measure does per cube; N^d is exact.
  const int d = c.f1.d;
  return std::exp2(c.alpha * (l * d)) * std::pow(static_cast<double>(n), d);
}

double tower_value(const DemocracyCase& c, int n) {
  c.validate();
  if (n < 1) throw ContractViolation("tower needs N >= 1");
  const double d = c.f1.d;
  const double beta = c.coefficient_exponent();
  if (std::isinf(c.f1.q)) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) best = std::max(best, std::exp2(-j * d * beta));
    return best;
  }
  std::vector<double> levels;
  levels.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) levels.push_back(std::exp2(-j * d * beta * c.f1.q));
  return std::pow(sorted_sum(std::move(levels)), 1.0 / c.f1.q);
}

double tower_mass(const DemocracyCase& c, int n) {
  if (n < 1) throw ContractViolation("tower needs N >= 1");
  if (c.alpha == 1.0) return n;
  std::vector<double> levels;
  for (int j = 0; j < n; ++j) levels.push_back(std::exp2(j * c.f1.d * (1.0 - c.alpha)));
  return sorted_sum(std::move(levels));
}

std::vector<DemocracyRow> democracy_ratio_sweep(const DemocracyCase& c, const SweepSpec& spec) {
  c.validate();
  const int d = c.f1.d;
  const MeasureSpec nu{c.alpha};
  std::mt19937_64 rng(spec.seed);
  std::vector<DemocracyRow> rows;
  auto push = [&](FamilyKind kind, std::int64_t n, double l, double mass, double value) {
    rows.push_back({kind, n, l, mass, value, value / std::pow(mass, 1.0 / c.f1.p)});
  };
  for (FamilyKind kind : spec.families) {
    for (std::int64_t n : spec.sizes) {
      switch (kind) {
        case FamilyKind::disjoint_grid:
          for (int l : spec.grid_log_sides) {
            const CubeSet g = disjoint_grid(d, n, l);
            push(kind, n, l, nu_measure(g, nu), democracy_value(g, c));
          }
          break;
        case FamilyKind::tower:
          push(kind, n, 0, tower_mass(c, static_cast<int>(n)), tower_value(c, static_cast<int>(n)));
          break;
        case FamilyKind::shifted_row: {
          const CubeSet g = shifted_row(d, n);
          push(kind, n, 0, nu_measure(g, nu), democracy_value(g, c));
          break;
        }
        case FamilyKind::random_mixed:
          for (std::size_t draw = 0; draw < spec.random_draws; ++draw) {
            const CubeSet g = random_mixed(d, static_cast<std::size_t>(n), spec.random_scale_range, rng);
            push(kind, n, spec.random_scale_range, nu_measure(g, nu), democracy_value(g, c));
          }
          break;
      }
    }
  }
  return rows;
}

double ratio_spread(const std::vector<DemocracyRow>& rows) {
  if (rows.empty()) return 1.0;
  auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(),
                                      [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
  return hi->ratio / lo->ratio;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("slope fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace rna
