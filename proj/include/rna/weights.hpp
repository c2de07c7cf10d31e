#pragma once

// Weight functions eta for discrete Lorentz spaces.
//
// Two families ship:
//   power     eta(t) = t^{1/p}
//   power-log eta(t) = t^{1/p} ell(t)^b,  ell(t) = 1 + log t       (t >= 1)
//                                         ell(t) = 1 / (1 - log t) (t <  1)
// Both may carry an extra factor t^xi (the weight t^xi eta(t) of the
// shifted Lorentz scale). ell is nondecreasing with ell(1) = 1, so every
// member with b >= 0 is nondecreasing and doubling, and its dilation function
// is exactly M(s) = s^{1/p + xi}.

#include <optional>
#include <string>
#include <string_view>

namespace rna {

enum class WeightFamily { power, power_log };

/// (s0, delta) with delta >= M_eta(s0) and delta < 1.
struct WeightCertificate {
  double s0 = 0.5;
  double delta = 1.0;
};

/// Logarithmic sampling grid 2^{log2_min} .. 2^{log2_max} for sup-type quantities.
struct GridSpec {
  double log2_min = -64.0;
  double log2_max = 64.0;
  int points = 1024;
};

class WeightFn {
public:
  /// eta(t) = t^{1/p}, 0 < p < inf.
  static WeightFn power(double p);
  /// eta(t) = t^{1/p} ell(t)^b with 0 < p <= inf, b >= 0 (p = inf needs b > 0).
  static WeightFn power_log(double p, double b);
  /// `power:p=2` or `powerlog:p=2,b=1`. Throws ParseError.
  static WeightFn parse(std::string_view spec);

  /// t^xi eta(t).
  WeightFn shifted(double xi) const;
  /// Re-certify at a caller-chosen s0; throws CapabilityError when M(s0) < 1
  /// cannot be certified.
  WeightFn with_s0(double s0) const;

  double operator()(double t) const;

  WeightFamily family() const noexcept { return family_; }
  double p() const noexcept { return p_; }
  double log_exponent() const noexcept { return b_; }
  double shift() const noexcept { return shift_; }
  /// Total power exponent 1/p + xi.
  double exponent() const noexcept { return exponent_; }
  /// True when eta is a pure power of t (closed forms apply).
  bool is_pure_power() const noexcept { return b_ == 0.0; }

  /// Smallest C with eta(2t) <= C eta(t) for all t > 0.
  double doubling_constant() const;

  const std::optional<WeightCertificate>& certificate() const noexcept { return cert_; }
  bool certified() const noexcept { return cert_.has_value(); }

  std::string spec() const;

private:
  WeightFn(WeightFamily family, double p, double b, double shift);
  void certify(std::optional<double> s0);

  WeightFamily family_;
  double p_;
  double b_;
  double shift_;
  double exponent_;
  std::optional<WeightCertificate> cert_;
};

/// M_eta(s) = sup_{t>0} eta(st)/eta(t). Closed form s^{exponent} for pure
/// powers; otherwise the sup over the grid, which is a lower bound of the
/// true value.
double dilation_fn(const WeightFn& eta, double s, const GridSpec& grid = {});

struct GeometricSum {
  double sum = 0.0;    // sum_{j=0}^{J} eta(s0^j t)
  double bound = 0.0;  // eta(t) / (1 - delta)
};

/// Partial geometric sum against its bound. Throws CapabilityError when eta
/// has no (s0, delta) certificate.
GeometricSum geometric_sum_bound(const WeightFn& eta, double t, int cutoff);

/// int_lo^hi eta(t)^mu dt/t, lo >= 0. Closed form for pure powers and for
/// exponent-0 weights; adaptive Gauss-Kronrod in log t otherwise, with the
/// piece [0, hi] split into [s0^{j+1} hi, s0^j hi] and cut off by the
/// geometric tail bound. Throws DivergenceError when lo = 0 and the integral
/// diverges, NumericError when the quadrature misses `tol`.
double weight_power_integral(const WeightFn& eta, double mu, double lo, double hi,
                             double tol = 1e-12);

/// g(t) = int_0^t eta(s)/s ds.
double smoothed_weight(const WeightFn& eta, double t, double tol = 1e-12);

/// Proof constants of C1 eta(t) <= g(t) <= C2 eta(t):
/// C1 = log 2 / C_dbl, C2 = log(1/s0) / (1 - delta).
std::pair<double, double> smoothed_weight_constants(const WeightFn& eta);

/// log M_eta(t_min) / log t_min.
double boyd_lower_index(const WeightFn& eta, double t_min, const GridSpec& grid = {});

}  // namespace rna
