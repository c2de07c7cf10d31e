#include "rna/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rna/errors.hpp"

namespace rna {

namespace {

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += x;
  return total;
}

}  // namespace

double StepRearrangement::operator()(double t) const {
  if (t < 0.0) throw ContractViolation("rearrangement evaluated at negative t");
  // First breakpoint strictly greater than t closes the step containing t.
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  if (it == breakpoints.end()) return 0.0;
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

StepRearrangement rearrange(const CoeffSeq& s, const MeasureSpec& m, const Weighting& u) {
  std::vector<std::pair<double, double>> items;  // (|u_Q s_Q|, nu(Q))
  items.reserve(s.size());
  for (const auto& [q, v] : s) {
    const double w = u ? u(q) : 1.0;
    if (!(w > 0.0)) throw ContractViolation("weight sequence must be strictly positive on " + to_string(q));
    items.emplace_back(std::abs(w * v), m(q));
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  StepRearrangement r;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    std::vector<double> masses;
    while (j < items.size() && items[j].first == items[i].first) masses.push_back(items[j++].second);
    const double mass = sorted_sum(std::move(masses));
    r.values.push_back(items[i].first);
    r.step_masses.push_back(mass);
    r.breakpoints.push_back(r.breakpoints.back() + mass);
    i = j;
  }
  return r;
}

double distribution(const CoeffSeq& s, const MeasureSpec& m, double lambda, const Weighting& u) {
  if (!(lambda > 0.0)) throw ContractViolation("distribution needs lambda > 0");
  std::vector<double> masses;
  for (const auto& [q, v] : s) {
    const double w = u ? u(q) : 1.0;
    if (std::abs(w * v) > lambda) masses.push_back(m(q));
  }
  return sorted_sum(std::move(masses));
}

void LorentzParams::validate() const {
  if (!(mu > 0.0)) throw ContractViolation("Lorentz exponent mu must be > 0");
  if (!(xi >= 0.0) || std::isinf(xi)) throw ContractViolation("Lorentz shift xi must be finite and >= 0");
}

double lorentz_norm(const StepRearrangement& r, const LorentzParams& params, double tol) {
  params.validate();
  const WeightFn w = params.combined();
  if (r.steps() == 0) return 0.0;

  if (std::isinf(params.mu)) {
    // eta~ is nondecreasing and s* is a right-continuous step function, so the
    // sup over each step is the limit at its right end T_k.
    double best = 0.0;
    for (std::size_t k = 0; k < r.steps(); ++k) best = std::max(best, w(r.breakpoints[k + 1]) * r.values[k]);
    return best;
  }

  // Values are taken relative to the top one, so scaling s by a power of two
  // scales the result exactly.
  const double mu = params.mu;
  const double top = r.values[0];
  std::vector<double> terms;
  terms.reserve(r.steps());
  for (std::size_t k = 0; k < r.steps(); ++k) {
    const double lo = r.breakpoints[k];
    const double hi = r.breakpoints[k + 1];
    double piece = 0.0;
    if (w.is_pure_power() && w.exponent() > 0.0) {
      const double e = w.exponent() * mu;
      piece = lo == 0.0 ? std::pow(hi, e) / e
                        : std::pow(lo, e) * std::expm1(e * std::log1p(r.step_masses[k] / lo)) / e;
    } else {
      piece = weight_power_integral(w, mu, lo, hi, tol);
    }
    terms.push_back(std::pow(r.values[k] / top, mu) * piece);
  }
  return top * std::pow(sorted_sum(std::move(terms)), 1.0 / mu);
}

double lorentz_norm(const CoeffSeq& s, const MeasureSpec& m, const LorentzParams& params, double tol) {
  return lorentz_norm(rearrange(s, m, params.u), params, tol);
}

double lorentz_norm_via_distribution(const CoeffSeq& s, const MeasureSpec& m,
                                     const LorentzParams& params) {
  params.validate();
  const WeightFn w = params.combined();
  if (!w.certified())
    throw CapabilityError("distribution form needs t^xi eta(t) in W+, got " + w.spec());
  const StepRearrangement r = rearrange(s, m, params.u);
  if (r.steps() == 0) return 0.0;

  // lambda_nu(lambda) = T_k for lambda in [v_{k+1}, v_k), with v_{m+1} = 0.
  if (std::isinf(params.mu)) {
    double best = 0.0;
    for (std::size_t k = 0; k < r.steps(); ++k) best = std::max(best, r.values[k] * w(r.breakpoints[k + 1]));
    return best;
  }
  const double mu = params.mu;
  const double top = r.values[0];
  std::vector<double> terms;
  for (std::size_t k = 0; k < r.steps(); ++k) {
    const double upper = std::pow(r.values[k] / top, mu);
    const double lower = k + 1 < r.steps() ? std::pow(r.values[k + 1] / top, mu) : 0.0;
    terms.push_back(std::pow(w(r.breakpoints[k + 1]), mu) * (upper - lower));
  }
  return top * std::pow(sorted_sum(std::move(terms)), 1.0 / mu);
}

double lorentz_triangle_exponent(const LorentzParams& params) {
  params.validate();
  const WeightFn w = params.combined();
  const double m = std::min(params.mu, 1.0);
  return 1.0 / (1.0 / m + w.exponent() + w.log_exponent());
}

double indicator_lower_bound(const LorentzParams& params, double total_mass, double tol) {
  params.validate();
  const WeightFn w = params.combined();
  if (!(total_mass > 0.0)) return 0.0;
  if (std::isinf(params.mu)) return w(total_mass);
  return std::pow(weight_power_integral(w, params.mu, total_mass / 2.0, total_mass, tol), 1.0 / params.mu);
}

}  // namespace rna
