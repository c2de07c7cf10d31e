#include "rna/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "rna/errors.hpp"

namespace rna {

namespace {

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += x;
  return total;
}

// |Q|^{e} |value|, evaluated as one exp2 so the cube power is not rounded twice.
double scaled_coefficient(const DyadicCube& q, double exponent, double value) {
  return std::abs(value) * checked_exp2(exponent * q.log2_volume());
}

// Largest |s_Q|. Norms are evaluated on s / peak and scaled back, which keeps
// homogeneity exact for power-of-two factors and avoids overflow in |s_Q|^q.
double peak(const CoeffSeq& seq) {
  double m = 0.0;
  for (const auto& [q, v] : seq) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double SpaceParams::rho() const noexcept { return std::min({1.0, p, q}); }

bool SpaceParams::additive() const noexcept { return p == q && std::isfinite(p); }

void SpaceParams::validate() const {
  if (d < 1) throw ContractViolation("dimension must be >= 1");
  if (!std::isfinite(s)) throw ContractViolation("smoothness s must be finite");
  if (!(p > 0.0) || !(q > 0.0)) throw ContractViolation("exponents p, q must be > 0");
  if (kind == SpaceKind::triebel_lizorkin && std::isinf(p))
    throw ContractViolation("Triebel-Lizorkin needs p < inf");
}

std::string SpaceParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind == SpaceKind::triebel_lizorkin ? "f" : "b") << "(s=" << s << ",p=" << p << ",q=" << q
     << ",d=" << d << ")";
  return os.str();
}

double atom_norm(const DyadicCube& q, const SpaceParams& params) {
  params.validate();
  const double inv_p = std::isinf(params.p) ? 0.0 : 1.0 / params.p;
  return checked_exp2((-params.s / params.d + inv_p - 0.5) * q.log2_volume());
}

double tl_norm(const CoeffSeq& seq, const SpaceParams& params) {
  params.validate();
  if (params.kind != SpaceKind::triebel_lizorkin) throw ContractViolation("tl_norm given Besov parameters");
  if (seq.dim() != params.d) throw ContractViolation("sequence dimension does not match d");
  if (seq.empty()) return 0.0;

  const double base = -params.s / params.d - 0.5;
  const double top = peak(seq);
  std::vector<std::pair<DyadicCube, double>> terms;
  terms.reserve(seq.size());
  if (std::isinf(params.q)) {
    for (const auto& [q, v] : seq) terms.emplace_back(q, scaled_coefficient(q, base, v / top));
    return top * integrate_power_of_cube_max(terms, params.p, params.p);
  }
  // (a_Q)^q with a_Q = |Q|^{base} |s_Q|, folded into one power.
  for (const auto& [q, v] : seq)
    terms.emplace_back(q, std::pow(std::abs(v / top), params.q) * checked_exp2(base * params.q * q.log2_volume()));
  return top * integrate_power_of_cube_sum(terms, params.p / params.q, params.p);
}

double besov_norm(const CoeffSeq& seq, const SpaceParams& params) {
  params.validate();
  if (params.kind != SpaceKind::besov) throw ContractViolation("besov_norm given Triebel-Lizorkin parameters");
  if (seq.dim() != params.d) throw ContractViolation("sequence dimension does not match d");
  if (seq.empty()) return 0.0;

  const double inv_p = std::isinf(params.p) ? 0.0 : 1.0 / params.p;
  const double e = -params.s / params.d + inv_p - 0.5;
  const double top = peak(seq);
  std::map<int, std::vector<double>> by_scale;
  for (const auto& [q, v] : seq) by_scale[q.scale].push_back(scaled_coefficient(q, e, v / top));

  std::vector<double> level;  // per-scale l^p norms
  for (auto& [j, c] : by_scale) {
    if (std::isinf(params.p)) {
      level.push_back(*std::max_element(c.begin(), c.end()));
    } else {
      for (double& x : c) x = std::pow(x, params.p);
      level.push_back(std::pow(sorted_sum(std::move(c)), 1.0 / params.p));
    }
  }
  if (std::isinf(params.q)) return top * *std::max_element(level.begin(), level.end());
  for (double& x : level) x = std::pow(x, params.q);
  return top * std::pow(sorted_sum(std::move(level)), 1.0 / params.q);
}

double space_norm(const CoeffSeq& seq, const SpaceParams& params) {
  return params.kind == SpaceKind::triebel_lizorkin ? tl_norm(seq, params) : besov_norm(seq, params);
}

double additive_term(const DyadicCube& q, double value, const SpaceParams& params) {
  if (!params.additive()) throw CapabilityError("additive_term needs p = q < inf, got " + params.describe());
  const double e = -params.s / params.d + 1.0 / params.p - 0.5;
  return std::pow(std::abs(value), params.p) * checked_exp2(e * params.p * q.log2_volume());
}

double weight_of(const DyadicCube& q, const WeightSeq& w) { return w(q); }

LorentzBesovCheck lorentz_equals_besov_check(const CoeffSeq& seq, double s1, double p1,
                                             const SpaceParams& f2, double tau) {
  if (!(tau > 0.0) || std::isinf(tau)) throw ContractViolation("tau must lie in (0, inf)");
  if (!(p1 > 0.0) || std::isinf(p1)) throw ContractViolation("p1 must lie in (0, inf)");
  f2.validate();
  const int d = f2.d;
  LorentzBesovCheck out;
  out.alpha = p1 * ((f2.s - s1) / d - 1.0 / f2.p) + 1.0;
  out.gamma = s1 + d * (1.0 / tau - 1.0 / p1) * (1.0 - out.alpha);

  LorentzParams lp;
  lp.eta = WeightFn::power(tau);
  lp.mu = tau;
  lp.u = WeightSeq{f2}.as_weighting();
  out.lhs = lorentz_norm(seq, MeasureSpec{out.alpha}, lp);
  out.rhs = besov_norm(seq, SpaceParams::besov(out.gamma, tau, tau, d));
  out.ok = std::abs(out.lhs - out.rhs) <= 1e-10 * std::max({out.lhs, out.rhs, 1.0});
  return out;
}

}  // namespace rna
