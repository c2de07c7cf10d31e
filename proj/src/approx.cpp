#include "rna/approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

#include "rna/errors.hpp"

namespace rna {

namespace {

// Budgets are sums of |Q|^alpha; allow the rounding of a different summation order.
bool fits(double mass, double budget) { return mass <= budget * (1.0 + 1e-12); }

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += x;
  return total;
}

struct Items {
  std::vector<DyadicCube> cubes;
  std::vector<double> values;
  std::vector<double> masses;
};

Items items_of(const CoeffSeq& s, const MeasureSpec& nu) {
  Items it;
  for (const auto& [q, v] : s) {
    it.cubes.push_back(q);
    it.values.push_back(v);
    it.masses.push_back(nu(q));
  }
  return it;
}

CoeffSeq dropped_part(const CoeffSeq& s, const Items& it, const std::vector<bool>& kept) {
  CoeffSeq out(s.dim());
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (!kept[i]) out.set(it.cubes[i], it.values[i]);
  return out;
}

Approximation finish(const CoeffSeq& s, const Items& it, const std::vector<bool>& kept,
                     const ApproxParams& params) {
  Approximation a;
  std::vector<double> masses;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (kept[i]) {
      a.support.push_back(it.cubes[i]);
      masses.push_back(it.masses[i]);
    }
  a.mass = sorted_sum(std::move(masses));
  a.error = space_norm(dropped_part(s, it, kept), params.f);
  return a;
}

void require_additive(const ApproxParams& params) {
  if (!params.f.additive())
    throw CapabilityError("knapsack mode needs an additive error norm (p = q < inf), got " +
                          params.f.describe());
}

// Every subset once, sorted by kept mass, with the running best error.
struct BruteTable {
  std::size_t n = 0;
  std::vector<double> masses;
  std::vector<double> best_error;
  std::vector<std::uint64_t> best_mask;

  std::vector<bool> kept_at(double budget) const {
    auto pos = std::upper_bound(masses.begin(), masses.end(), budget * (1.0 + 1e-12));
    const std::uint64_t mask = best_mask[static_cast<std::size_t>(pos - masses.begin()) - 1];
    std::vector<bool> kept(n);
    for (std::size_t i = 0; i < n; ++i) kept[i] = (mask >> i) & 1U;
    return kept;
  }
};

BruteTable brute_table(const CoeffSeq& s, const Items& it, const ApproxParams& params) {
  const std::size_t n = it.cubes.size();
  if (n > kBruteForceLimit)
    throw CapabilityError("brute mode enumerates 2^n subsets and is limited to n <= " +
                          std::to_string(kBruteForceLimit));
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> mass(count), error(count);
  std::vector<bool> kept(n);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<double> masses;
    for (std::size_t i = 0; i < n; ++i) {
      kept[i] = (mask >> i) & 1U;
      if (kept[i]) masses.push_back(it.masses[i]);
    }
    mass[mask] = sorted_sum(std::move(masses));
    error[mask] = space_norm(dropped_part(s, it, kept), params.f);
  }
  std::vector<std::uint64_t> order(count);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mass[a] < mass[b]; });
  BruteTable t;
  t.n = n;
  for (std::uint64_t m : order) {
    t.masses.push_back(mass[m]);
    if (t.best_error.empty() || error[m] < t.best_error.back()) {
      t.best_error.push_back(error[m]);
      t.best_mask.push_back(m);
    } else {
      t.best_error.push_back(t.best_error.back());
      t.best_mask.push_back(t.best_mask.back());
    }
  }
  return t;
}

// Additive-form error of the dropped cubes, ||.||^p summed directly.
double additive_error(const std::vector<double>& weights, const std::vector<bool>& kept,
                      double p) {
  std::vector<double> dropped;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (!kept[i]) dropped.push_back(weights[i]);
  return std::pow(sorted_sum(std::move(dropped)), 1.0 / p);
}

}  // namespace

Solver parse_solver(std::string_view name) {
  if (name == "brute") return Solver::brute;
  if (name == "knapsack") return Solver::knapsack;
  if (name == "greedy") return Solver::greedy;
  throw ParseError("unknown solver '" + std::string(name) + "' (brute | knapsack | greedy)", 0);
}

std::string to_string(Solver solver) {
  switch (solver) {
    case Solver::brute: return "brute";
    case Solver::knapsack: return "knapsack";
    case Solver::greedy: return "greedy";
  }
  return "?";
}

Solver default_solver(const SpaceParams& f, std::size_t support_size) {
  if (f.additive()) return Solver::knapsack;
  if (support_size <= kBruteForceLimit) return Solver::brute;
  return Solver::greedy;
}

void ApproxParams::validate() const {
  if (!(xi > 0.0) || std::isinf(xi)) throw ContractViolation("rate xi must lie in (0, inf)");
  if (!(mu > 0.0)) throw ContractViolation("summability mu must be > 0");
  f.validate();
}

Approximation sigma_exact(const CoeffSeq& s, double budget, const ApproxParams& params, Solver mode) {
  params.validate();
  if (!(budget >= 0.0)) throw ContractViolation("budget must be >= 0");
  const Items it = items_of(s, params.nu);
  const std::size_t n = it.cubes.size();

  if (mode == Solver::greedy) throw CapabilityError("greedy is not an exact mode; use sigma_greedy");

  if (mode == Solver::brute) {
    const BruteTable table = brute_table(s, it, params);
    Approximation best = finish(s, it, table.kept_at(budget), params);
    best.nodes = table.masses.size();
    return best;
  }

  require_additive(params);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = additive_term(it.cubes[i], it.values[i], params.f);

  // Branch and bound over items sorted by weight density, bounded by the
  // fractional relaxation of the remaining capacity. The search minimises the
  // dropped weight directly: maximising the kept weight instead loses the
  // dropped tail to cancellation when weights span many decades.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = w[a] / it.masses[a], db = w[b] / it.masses[b];
    if (da != db) return da > db;
    if (it.masses[a] != it.masses[b]) return it.masses[a] < it.masses[b];
    return a < b;
  });
  std::vector<double> suffix(n + 1, 0.0);  // weight of order[k..n)
  for (std::size_t k = n; k-- > 0;) suffix[k] = w[order[k]] + suffix[k + 1];
  // Identical items (same mass and weight) sit next to each other; only
  // prefixes of such a run are explored, which removes the symmetric
  // subtrees that indicator sequences otherwise produce.
  std::vector<std::size_t> run_end(n);
  for (std::size_t k = n; k-- > 0;) {
    const bool same = k + 1 < n && it.masses[order[k]] == it.masses[order[k + 1]] && w[order[k]] == w[order[k + 1]];
    run_end[k] = same ? run_end[k + 1] : k + 1;
  }
  const double cap = budget * (1.0 + 1e-12);

  constexpr std::size_t kNodeCap = 50'000'000;
  std::vector<bool> take(n), best_take(n);
  double best_dropped = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;
  bool truncated = false;

  auto lower_bound = [&](std::size_t pos, double room, double dropped) {
    for (std::size_t k = pos; k < n; ++k) {
      const std::size_t i = order[k];
      if (it.masses[i] <= room) {
        room -= it.masses[i];
      } else {
        return dropped + w[i] * (1.0 - room / it.masses[i]) + suffix[k + 1];
      }
    }
    return dropped;
  };

  auto search = [&](auto&& self, std::size_t pos, double room, double dropped) -> void {
    if (++nodes > kNodeCap) {
      truncated = true;
      return;
    }
    if (pos == n) {
      if (dropped < best_dropped) {
        best_dropped = dropped;
        best_take = take;
      }
      return;
    }
    if (lower_bound(pos, room, dropped) >= best_dropped) return;
    const std::size_t i = order[pos];
    if (it.masses[i] <= room) {
      take[i] = true;
      self(self, pos + 1, room - it.masses[i], dropped);
      take[i] = false;
    }
    const std::size_t next = run_end[pos];
    self(self, next, room, dropped + w[i] * static_cast<double>(next - pos));
  };
  search(search, 0, cap, 0.0);

  std::vector<bool> kept(n);
  for (std::size_t i = 0; i < n; ++i) kept[i] = best_take[i];
  Approximation a = finish(s, it, kept, params);
  a.nodes = nodes;
  a.certified_optimal = !truncated;
  return a;
}

Weighting density_weighting(const ApproxParams& params) {
  const SpaceParams f = params.f;
  const MeasureSpec nu = params.nu;
  const double inv_p = std::isinf(f.p) ? 0.0 : 1.0 / f.p;
  return [f, nu, inv_p](const DyadicCube& q) { return atom_norm(q, f) / std::pow(nu(q), inv_p); };
}

namespace {

std::vector<std::size_t> greedy_order(const Items& it, const Weighting& u) {
  std::vector<double> key(it.cubes.size());
  for (std::size_t i = 0; i < key.size(); ++i) {
    const double w = u(it.cubes[i]);
    if (!(w > 0.0)) throw ContractViolation("greedy weights must be strictly positive");
    key[i] = std::abs(w * it.values[i]);
  }
  std::vector<std::size_t> order(key.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return order;
}

}  // namespace

Approximation sigma_greedy(const CoeffSeq& s, double budget, const ApproxParams& params, const Weighting& u) {
  params.validate();
  if (!(budget >= 0.0)) throw ContractViolation("budget must be >= 0");
  const Items it = items_of(s, params.nu);
  const Weighting weights = u ? u : density_weighting(params);
  std::vector<bool> kept(it.cubes.size());
  double used = 0.0;
  for (std::size_t i : greedy_order(it, weights)) {
    if (fits(used + it.masses[i], budget)) {
      kept[i] = true;
      used += it.masses[i];
    }
  }
  Approximation a = finish(s, it, kept, params);
  a.certified_optimal = false;
  return a;
}

double SigmaProfile::operator()(double t) const {
  if (t < 0.0) throw ContractViolation("sigma profile evaluated at negative budget");
  auto pos = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  return errors[static_cast<std::size_t>(pos - breakpoints.begin()) - 1];
}

namespace {

// Turns (mass, error) candidates into the lower staircase sigma(t).
SigmaProfile staircase(std::vector<std::pair<double, double>> points, double full_error, double total_mass) {
  std::sort(points.begin(), points.end());
  SigmaProfile p;
  p.breakpoints.push_back(0.0);
  p.errors.push_back(full_error);
  for (const auto& [mass, err] : points) {
    if (!(err < p.errors.back())) continue;
    if (mass <= p.breakpoints.back()) {
      p.errors.back() = err;
    } else {
      p.breakpoints.push_back(mass);
      p.errors.push_back(err);
    }
  }
  // The full support always ends the staircase with error 0.
  if (p.errors.back() != 0.0) {
    if (total_mass > p.breakpoints.back()) {
      p.breakpoints.push_back(total_mass);
      p.errors.push_back(0.0);
    } else {
      p.errors.back() = 0.0;
    }
  }
  return p;
}

}  // namespace

SigmaProfile sigma_profile(const CoeffSeq& s, const ApproxParams& params, Solver solver, const Weighting& u) {
  params.validate();
  const Items it = items_of(s, params.nu);
  const std::size_t n = it.cubes.size();
  const double full = space_norm(s, params.f);
  const double total = sorted_sum(it.masses);
  if (n == 0) return SigmaProfile{{0.0}, {0.0}, true};

  std::vector<std::pair<double, double>> points;
  SigmaProfile out;

  if (solver == Solver::brute) {
    const BruteTable table = brute_table(s, it, params);
    for (std::size_t i = 0; i < table.masses.size(); ++i)
      if (table.masses[i] > 0.0) points.emplace_back(table.masses[i], table.best_error[i]);
    out = staircase(std::move(points), full, total);
    out.exact = true;
    return out;
  }

  if (solver == Solver::greedy) {
    const Weighting weights = u ? u : density_weighting(params);
    std::vector<bool> kept(n);
    std::vector<double> masses;
    for (std::size_t i : greedy_order(it, weights)) {
      kept[i] = true;
      masses.push_back(it.masses[i]);
      points.emplace_back(sorted_sum(masses), space_norm(dropped_part(s, it, kept), params.f));
    }
    out = staircase(std::move(points), full, total);
    out.exact = false;
    return out;
  }

  // Knapsack: Pareto frontier of (kept mass, dropped weight), built one item at a
  // time by merging the current list with its shift by that item.
  require_additive(params);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = additive_term(it.cubes[i], it.values[i], params.f);
  // weight = dropped weight among the items merged so far; all states share
  // that prefix, so lower is better and no cancellation enters.
  struct State {
    double mass;
    double weight;
    std::vector<bool> kept;
  };
  constexpr std::size_t kFrontierCap = 2'000'000;
  std::vector<State> frontier{{0.0, 0.0, std::vector<bool>(n)}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<State> shifted;
    shifted.reserve(frontier.size());
    for (const auto& st : frontier) {
      State nx{st.mass + it.masses[i], st.weight, st.kept};
      nx.kept[i] = true;
      shifted.push_back(std::move(nx));
    }
    for (auto& st : frontier) st.weight += w[i];
    std::vector<State> merged;
    merged.reserve(frontier.size() + shifted.size());
    std::merge(std::make_move_iterator(frontier.begin()), std::make_move_iterator(frontier.end()),
               std::make_move_iterator(shifted.begin()), std::make_move_iterator(shifted.end()),
               std::back_inserter(merged), [](const State& a, const State& b) {
                 return a.mass != b.mass ? a.mass < b.mass : a.weight < b.weight;
               });
    frontier.clear();
    for (auto& st : merged)
      if (frontier.empty() || st.weight < frontier.back().weight) frontier.push_back(std::move(st));
    if (frontier.size() > kFrontierCap)
      throw CapabilityError("knapsack frontier exceeded " + std::to_string(kFrontierCap) + " states");
  }
  // Masses re-summed in sorted order so equal sets give bit-identical budgets
  // whichever solver produced them.
  for (const auto& st : frontier) {
    if (!(st.mass > 0.0)) continue;
    std::vector<double> masses;
    for (std::size_t i = 0; i < n; ++i)
      if (st.kept[i]) masses.push_back(it.masses[i]);
    points.emplace_back(sorted_sum(std::move(masses)), additive_error(w, st.kept, params.f.p));
  }
  out = staircase(std::move(points), full, total);
  out.exact = true;
  return out;
}

double approx_norm(const SigmaProfile& profile, double xi, double mu) {
  if (!(xi > 0.0) || !(mu > 0.0)) throw ContractViolation("approx_norm needs xi > 0 and mu > 0");
  const auto& t = profile.breakpoints;
  const auto& e = profile.errors;
  if (std::isinf(mu)) {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) best = std::max(best, std::pow(t[i + 1], xi) * e[i]);
    return best;
  }
  const double r = xi * mu;
  std::vector<double> terms;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (e[i] == 0.0) continue;
    const double piece = t[i] == 0.0 ? std::pow(t[i + 1], r) / r
                                     : std::pow(t[i], r) * std::expm1(r * std::log(t[i + 1] / t[i])) / r;
    terms.push_back(std::pow(e[i], mu) * piece);
  }
  return std::pow(sorted_sum(std::move(terms)), 1.0 / mu);
}

double approx_norm(const CoeffSeq& s, const ApproxParams& params, Solver solver) {
  return approx_norm(sigma_profile(s, params, solver), params.xi, params.mu);
}

double approx_norm_dyadic(const SigmaProfile& profile, double xi, double mu) {
  if (!(xi > 0.0) || !(mu > 0.0)) throw ContractViolation("approx_norm_dyadic needs xi > 0 and mu > 0");
  const auto& t = profile.breakpoints;
  if (t.size() < 2) return 0.0;
  // sigma(2^k) = errors[0] for every k <= k0, the last k with 2^k < t_1.
  const int k0 = static_cast<int>(std::ceil(std::log2(t[1]))) - 1;
  const int k_end = static_cast<int>(std::ceil(std::log2(t.back())));  // sigma(2^k) = 0 from here on
  const double e0 = profile.errors[0];
  if (std::isinf(mu)) {
    double best = std::ldexp(1.0, 0) * std::exp2(k0 * xi) * e0;
    for (int k = k0 + 1; k < k_end; ++k) best = std::max(best, std::exp2(k * xi) * profile(std::ldexp(1.0, k)));
    return best;
  }
  const double r = xi * mu;
  std::vector<double> terms;
  terms.push_back(std::pow(e0, mu) * std::exp2(k0 * r) / (-std::expm1(-r * std::log(2.0))));
  for (int k = k0 + 1; k < k_end; ++k) terms.push_back(std::exp2(k * r) * std::pow(profile(std::ldexp(1.0, k)), mu));
  return std::pow(std::log(2.0) * sorted_sum(std::move(terms)), 1.0 / mu);
}

Decomposition decompose(const CoeffSeq& s, const ApproxParams& params, Solver solver) {
  params.validate();
  Decomposition out;
  if (s.empty()) return out;
  const Items it = items_of(s, params.nu);
  const double min_mass = *std::min_element(it.masses.begin(), it.masses.end());
  const double total = sorted_sum(it.masses);
  // phi_k = 0 while 2^{k-1} < min mass, phi_k = s once 2^{k-1} >= nu(supp).
  const int k_lo = static_cast<int>(std::ceil(std::log2(min_mass))) + 1;
  const int k_hi = std::max(k_lo, static_cast<int>(std::ceil(std::log2(total))) + 1);

  std::optional<BruteTable> table;
  if (solver == Solver::brute) table = brute_table(s, it, params);
  auto best_at = [&](int k) -> CoeffSeq {
    if (k >= k_hi) return s;
    const double budget = std::ldexp(1.0, k - 1);
    if (table) {
      const std::vector<bool> kept = table->kept_at(budget);
      CoeffSeq out(s.dim());
      for (std::size_t i = 0; i < kept.size(); ++i)
        if (kept[i]) out.set(it.cubes[i], it.values[i]);
      return out;
    }
    const Approximation a =
        solver == Solver::greedy ? sigma_greedy(s, budget, params) : sigma_exact(s, budget, params, solver);
    return s.restricted(CubeSet(s.dim(), a.support));
  };

  CoeffSeq previous(s.dim());
  std::vector<double> terms;
  for (int k = k_lo; k <= k_hi; ++k) {
    CoeffSeq current = best_at(k);
    CoeffSeq piece = current - previous;
    if (!piece.empty()) {
      const double norm = space_norm(piece, params.f);
      terms.push_back(std::exp2(k * params.xi) * norm);
      out.pieces.push_back({k, std::move(piece)});
    }
    previous = std::move(current);
  }
  if (std::isinf(params.mu)) {
    out.score = terms.empty() ? 0.0 : *std::max_element(terms.begin(), terms.end());
  } else {
    for (double& x : terms) x = std::pow(x, params.mu);
    out.score = std::pow(sorted_sum(std::move(terms)), 1.0 / params.mu);
  }
  return out;
}

double jackson_constant(std::span<const CoeffSeq> suite, const ApproxParams& params,
                        const LorentzParams& lorentz, Solver solver, const Weighting& greedy_u,
                        int grid_per_octave) {
  double best = 0.0;
  for (const auto& s : suite) {
    if (s.empty()) continue;
    const double denom = lorentz_norm(s, params.nu, lorentz);
    if (grid_per_octave > 0) {
      const Items it = items_of(s, params.nu);
      const double lo = *std::min_element(it.masses.begin(), it.masses.end());
      const double total = sorted_sum(it.masses);
      for (int m = 0;; ++m) {
        const double t = lo * std::exp2(static_cast<double>(m) / grid_per_octave);
        if (t >= total) break;
        const Approximation a = solver == Solver::greedy ? sigma_greedy(s, t, params, greedy_u)
                                                         : sigma_exact(s, t, params, solver);
        best = std::max(best, std::pow(t, params.xi) * a.error / denom);
      }
      continue;
    }
    const SigmaProfile prof = sigma_profile(s, params, solver, greedy_u);
    // t^xi sigma(t) increases on each step, so its sup there is the left
    // limit at the next breakpoint.
    for (std::size_t i = 0; i + 1 < prof.breakpoints.size(); ++i)
      best = std::max(best, std::pow(prof.breakpoints[i + 1], params.xi) * prof.errors[i] / denom);
  }
  return best;
}

double bernstein_constant(std::span<const CoeffSeq> suite, const ApproxParams& params,
                          const LorentzParams& lorentz) {
  double best = 0.0;
  for (const auto& s : suite) {
    if (s.empty()) continue;
    const double mass = nu_measure(s.support(), params.nu);
    const double ratio = lorentz_norm(s, params.nu, lorentz) / (std::pow(mass, params.xi) * space_norm(s, params.f));
    best = std::max(best, ratio);
  }
  return best;
}

}  // namespace rna
