#include "rna/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rna/errors.hpp"

namespace rna {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ell(e^u)
double ell_of_log(double u) { return u >= 0.0 ? 1.0 + u : 1.0 / (1.0 - u); }

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  if (s == "inf" || s == "infinity") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw ParseError("weight spec: bad number '" + s + "' for " + std::string(what), 0);
  return v;
}

// Antiderivative in u = log t of ell(e^u)^c, for the exponent-0 family.
double ell_power_antiderivative(double u, double c) {
  if (u >= 0.0) {
    // F(0) must match the branch below at u = 0.
    const double left = std::abs(c - 1.0) < 1e-15 ? 0.0 : 1.0 / (c - 1.0);
    return left + (std::pow(1.0 + u, c + 1.0) - 1.0) / (c + 1.0);
  }
  if (std::abs(c - 1.0) < 1e-15) return -std::log(1.0 - u);
  return std::pow(1.0 - u, 1.0 - c) / (c - 1.0);
}

// Adaptive Gauss-Kronrod on [u0, u1] of f(u), split into pieces of width <= 2.
// One 31-point Kronrod panel against its two halves; the difference is the
// error estimate. Boost's own estimate has a roundoff floor well above 1e-12
// relative on short panels, so it is not used.
double kronrod(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0);
}

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth,
                      double& error_out) {
  const double m = 0.5 * (a + b);
  const double left = kronrod(f, a, m), right = kronrod(f, m, b);
  const double halves = left + right;
  const double err = std::abs(halves - whole);
  if (err <= tol * std::abs(halves) || depth == 0 || !(m > a && m < b)) {
    error_out += err;
    return halves;
  }
  return adaptive_panel(f, a, m, left, tol, depth - 1, error_out) +
         adaptive_panel(f, m, b, right, tol, depth - 1, error_out);
}

double log_quadrature(const std::function<double(double)>& f, double u0, double u1, double tol,
                      double& error_out) {
  if (!(u1 > u0)) return 0.0;
  // ell has a jump in its second derivative at u = 0; keep it on a panel edge.
  if (u0 < 0.0 && u1 > 0.0) return log_quadrature(f, u0, 0.0, tol, error_out) + log_quadrature(f, 0.0, u1, tol, error_out);
  const int pieces = std::max(1, static_cast<int>(std::ceil((u1 - u0) / 2.0)));
  const double width = (u1 - u0) / pieces;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double a = u0 + i * width;
    const double b = i + 1 == pieces ? u1 : a + width;
    total += adaptive_panel(f, a, b, kronrod(f, a, b), tol / 4, 30, error_out);
  }
  return total;
}

}  // namespace

WeightFn::WeightFn(WeightFamily family, double p, double b, double shift)
    : family_(family), p_(p), b_(b), shift_(shift), exponent_((std::isinf(p) ? 0.0 : 1.0 / p) + shift) {
  certify(std::nullopt);
}

WeightFn WeightFn::power(double p) {
  if (!(p > 0.0) || std::isinf(p)) throw ContractViolation("power weight needs 0 < p < inf");
  return WeightFn(WeightFamily::power, p, 0.0, 0.0);
}

WeightFn WeightFn::power_log(double p, double b) {
  if (!(p > 0.0)) throw ContractViolation("power-log weight needs p > 0");
  if (!(b >= 0.0) || std::isinf(b)) throw ContractViolation("power-log weight needs finite b >= 0");
  if (std::isinf(p) && b == 0.0)
    throw ContractViolation("p = inf with b = 0 is the constant weight, which is not in W");
  return WeightFn(WeightFamily::power_log, p, b, 0.0);
}

WeightFn WeightFn::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("weight spec needs 'family:key=value'", 0);
  const std::string_view family = spec.substr(0, colon);
  std::optional<double> p, b;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("weight spec item without '='", 0);
    const std::string_view key = item.substr(0, eq);
    const double value = parse_number(item.substr(eq + 1), key);
    if (key == "p")
      p = value;
    else if (key == "b")
      b = value;
    else
      throw ParseError("weight spec: unknown key '" + std::string(key) + "'", 0);
  }
  if (!p) throw ParseError("weight spec: missing p", 0);
  try {
    if (family == "power") {
      if (b) throw ParseError("weight spec: 'power' takes no b", 0);
      return power(*p);
    }
    if (family == "powerlog") {
      if (!b) throw ParseError("weight spec: 'powerlog' needs b", 0);
      return power_log(*p, *b);
    }
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("weight spec: ") + e.what(), 0);
  }
  throw ParseError("weight spec: unknown family '" + std::string(family) + "'", 0);
}

WeightFn WeightFn::shifted(double xi) const {
  if (!(xi >= 0.0) || std::isinf(xi)) throw ContractViolation("shift exponent must be finite and >= 0");
  WeightFn out = *this;
  out.shift_ = shift_ + xi;
  out.exponent_ = exponent_ + xi;
  out.certify(cert_ ? std::optional<double>(cert_->s0) : std::nullopt);
  if (!out.cert_) out.certify(std::nullopt);
  return out;
}

WeightFn WeightFn::with_s0(double s0) const {
  if (!(s0 > 0.0 && s0 < 1.0)) throw ContractViolation("s0 must lie in (0,1)");
  WeightFn out = *this;
  out.certify(s0);
  if (!out.cert_) throw CapabilityError("cannot certify M_eta(s0) < 1 for " + spec());
  return out;
}

double WeightFn::operator()(double t) const {
  if (!(t >= 0.0)) throw ContractViolation("weight evaluated at negative t");
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return kInf;
  if (b_ == 0.0) return std::pow(t, exponent_);
  const double u = std::log(t);
  return std::exp(exponent_ * u) * std::pow(ell_of_log(u), b_);
}

double WeightFn::doubling_constant() const {
  // ell(2t)/ell(t) peaks at t = 2^{-1/2} with value (1 + log(2)/2)^2.
  const double log_peak = 1.0 + std::log(2.0) / 2.0;
  return std::exp2(exponent_) * std::pow(log_peak, 2.0 * b_);
}

void WeightFn::certify(std::optional<double> s0) {
  cert_.reset();
  if (exponent_ <= 0.0) return;  // M_eta = 1 identically
  auto try_s0 = [&](double s) -> std::optional<WeightCertificate> {
    if (b_ == 0.0) {
      const double delta = std::pow(s, exponent_);
      if (delta < 1.0) return WeightCertificate{s, delta};
      return std::nullopt;
    }
    const double sampled = dilation_fn(*this, s, GridSpec{-64.0, 64.0, 512});
    const double delta = 1.1 * sampled;
    if (delta < 1.0) return WeightCertificate{s, delta};
    return std::nullopt;
  };
  if (s0) {
    cert_ = try_s0(*s0);
    return;
  }
  for (int k = 0; k <= 9 && !cert_; ++k) cert_ = try_s0(std::exp2(-std::exp2(k)));
}

std::string WeightFn::spec() const {
  std::ostringstream os;
  os.precision(17);
  if (family_ == WeightFamily::power)
    os << "power:p=" << p_;
  else
    os << "powerlog:p=" << (std::isinf(p_) ? std::string("inf") : std::to_string(p_)) << ",b=" << b_;
  if (shift_ != 0.0) os << ";xi=" << shift_;
  return os.str();
}

double dilation_fn(const WeightFn& eta, double s, const GridSpec& grid) {
  if (!(s > 0.0)) throw ContractViolation("dilation_fn needs s > 0");
  if (eta.is_pure_power()) return std::pow(s, eta.exponent());
  double best = 0.0;
  const int n = std::max(2, grid.points);
  for (int i = 0; i < n; ++i) {
    const double l2 = grid.log2_min + (grid.log2_max - grid.log2_min) * i / (n - 1);
    const double t = std::exp2(l2);
    const double num = eta(s * t);
    const double den = eta(t);
    if (den > 0.0 && std::isfinite(num)) best = std::max(best, num / den);
  }
  return best;
}

GeometricSum geometric_sum_bound(const WeightFn& eta, double t, int cutoff) {
  if (!eta.certified()) throw CapabilityError("geometric_sum_bound needs a weight certified in W+: " + eta.spec());
  if (!(t >= 0.0)) throw ContractViolation("geometric_sum_bound needs t >= 0");
  if (cutoff < 0) throw ContractViolation("geometric_sum_bound needs cutoff >= 0");
  const auto& c = *eta.certificate();
  GeometricSum out;
  if (t == 0.0) return out;
  double x = t;
  for (int j = 0; j <= cutoff; ++j) {
    const double v = eta(x);
    if (v == 0.0) break;
    out.sum += v;
    x *= c.s0;
  }
  out.bound = eta(t) / (1.0 - c.delta);
  return out;
}

double weight_power_integral(const WeightFn& eta, double mu, double lo, double hi, double tol) {
  if (!(mu > 0.0) || std::isinf(mu)) throw ContractViolation("weight_power_integral needs 0 < mu < inf");
  if (!(lo >= 0.0) || !(hi >= lo)) throw ContractViolation("weight_power_integral needs 0 <= lo <= hi");
  if (hi == lo) return 0.0;
  const double a = eta.exponent();
  const double b = eta.log_exponent();

  if (b == 0.0) {
    if (a <= 0.0) throw DivergenceError("constant weight: int eta^mu dt/t diverges");
    const double e = a * mu;
    if (lo == 0.0) return std::pow(hi, e) / e;
    // hi^e - lo^e without cancellation.
    return std::pow(lo, e) * std::expm1(e * std::log(hi / lo)) / e;
  }

  if (a <= 0.0) {
    const double c = b * mu;
    if (lo == 0.0 && c <= 1.0)
      throw DivergenceError("weight " + eta.spec() + " with mu=" + std::to_string(mu) +
                            ": int_0 eta(t)^mu dt/t diverges");
    const double upper = ell_power_antiderivative(std::log(hi), c);
    const double lower = lo == 0.0 ? 0.0 : ell_power_antiderivative(std::log(lo), c);
    return upper - lower;
  }

  auto integrand = [&](double u) {
    return std::exp(a * mu * u) * std::pow(ell_of_log(u), b * mu);
  };
  double err = 0.0;
  if (lo > 0.0) {
    const double v = log_quadrature(integrand, std::log(lo), std::log(hi), tol, err);
    if (err > tol * std::abs(v) && err > std::numeric_limits<double>::min())
      throw NumericError("quadrature missed tolerance for " + eta.spec(), err / std::abs(v));
    return v;
  }

  if (!eta.certified()) throw CapabilityError("no (s0, delta) certificate for " + eta.spec());
  const auto& c = *eta.certificate();
  const double delta_mu = std::pow(c.delta, mu);
  const double piece_log = std::log(1.0 / c.s0);
  double total = 0.0;
  double top = hi;
  for (int j = 0; j < 100000; ++j) {
    const double bottom = top * c.s0;
    total += log_quadrature(integrand, std::log(bottom), std::log(top), tol, err);
    // Remaining int_0^bottom <= sum_i eta(s0^i bottom)^mu log(1/s0).
    const double tail = std::pow(eta(bottom), mu) * piece_log / (1.0 - delta_mu);
    if (tail <= 0.25 * tol * total || bottom == 0.0) {
      const double achieved = (err + tail) / total;
      if (achieved > tol) throw NumericError("quadrature missed tolerance for " + eta.spec(), achieved);
      return total + tail / 2.0;
    }
    top = bottom;
  }
  throw NumericError("geometric tail did not converge", kInf);
}

double smoothed_weight(const WeightFn& eta, double t, double tol) {
  if (!(t > 0.0)) throw ContractViolation("smoothed_weight needs t > 0");
  if (!(tol > 0.0)) throw ContractViolation("smoothed_weight needs tol > 0");
  if (!eta.certified()) throw CapabilityError("smoothed_weight needs a weight in W+: " + eta.spec());
  if (eta.is_pure_power()) return std::pow(t, eta.exponent()) / eta.exponent();
  return weight_power_integral(eta, 1.0, 0.0, t, tol);
}

std::pair<double, double> smoothed_weight_constants(const WeightFn& eta) {
  if (!eta.certified()) throw CapabilityError("smoothed_weight_constants needs a weight in W+");
  const auto& c = *eta.certificate();
  return {std::log(2.0) / eta.doubling_constant(), std::log(1.0 / c.s0) / (1.0 - c.delta)};
}

double boyd_lower_index(const WeightFn& eta, double t_min, const GridSpec& grid) {
  if (!(t_min > 0.0 && t_min < 1.0)) throw ContractViolation("boyd_lower_index needs t_min in (0,1)");
  if (eta.is_pure_power()) return eta.exponent();
  return std::log(dilation_fn(eta, t_min, grid)) / std::log(t_min);
}

}  // namespace rna
