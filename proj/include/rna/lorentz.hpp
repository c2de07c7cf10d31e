#pragma once

// nu-rearrangements, distribution functions and the discrete Lorentz
// quasi-norms l^mu_eta(u, nu).

#include <limits>
#include <vector>

#include "rna/dyadic.hpp"
#include "rna/sequence.hpp"
#include "rna/weights.hpp"

namespace rna {

/// s*_nu as a right-continuous step function: value values[k] on
/// [breakpoints[k], breakpoints[k+1]), zero from breakpoints.back() on.
/// Ties are merged, so values are strictly decreasing.
struct StepRearrangement {
  std::vector<double> breakpoints{0.0};  // T_0 = 0 < T_1 < ... < T_m
  std::vector<double> values;            // v_1 > ... > v_m > 0
  std::vector<double> step_masses;       // T_k - T_{k-1}, summed directly

  std::size_t steps() const noexcept { return values.size(); }
  double total_mass() const noexcept { return breakpoints.back(); }
  double operator()(double t) const;
};

StepRearrangement rearrange(const CoeffSeq& s, const MeasureSpec& m, const Weighting& u = {});

/// lambda_nu(lambda) = nu({Q : |u_Q s_Q| > lambda}).
double distribution(const CoeffSeq& s, const MeasureSpec& m, double lambda, const Weighting& u = {});

struct LorentzParams {
  static constexpr double infinity = std::numeric_limits<double>::infinity();

  WeightFn eta = WeightFn::power(1.0);
  double mu = 1.0;  // (0, inf]
  double xi = 0.0;  // the space l^mu_{xi,eta} uses t^xi eta(t)
  Weighting u;      // empty: u = 1

  /// t^xi eta(t).
  WeightFn combined() const { return xi == 0.0 ? eta : eta.shifted(xi); }
  void validate() const;
};

/// (int_0^inf [eta~(t) s*(t)]^mu dt/t)^{1/mu}, or sup_t eta~(t) s*(t) for
/// mu = inf. Exact step accumulation for pure-power weights, quadrature with
/// relative tolerance `tol` otherwise. Throws DivergenceError when
/// int_0 eta~^mu dt/t diverges.
double lorentz_norm(const CoeffSeq& s, const MeasureSpec& m, const LorentzParams& params,
                    double tol = 1e-12);
double lorentz_norm(const StepRearrangement& r, const LorentzParams& params, double tol = 1e-12);

/// (mu int_0^inf [lambda eta~(lambda_nu(lambda))]^mu dlambda/lambda)^{1/mu},
/// sup_lambda lambda eta~(lambda_nu(lambda)) for mu = inf. lambda_nu is a step
/// function of lambda, so this is a finite sum. Requires eta~ certified in W+.
double lorentz_norm_via_distribution(const CoeffSeq& s, const MeasureSpec& m,
                                     const LorentzParams& params);

/// rho with ||a+b||^rho <= ||a||^rho + ||b||^rho for the Lorentz functional.
double lorentz_triangle_exponent(const LorentzParams& params);

/// [int_{T/2}^{T} eta~(t)^mu dt/t]^{1/mu}, the exact lower bound for
/// ||1_{Gamma,u}|| with T = nu(Gamma).
double indicator_lower_bound(const LorentzParams& params, double total_mass, double tol = 1e-12);

}  // namespace rna
