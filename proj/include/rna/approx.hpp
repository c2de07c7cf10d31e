#pragma once

// Restricted nonlinear approximation: the error sigma_nu(t, s) of the best
// approximant supported on a set of nu-mass at most t, its profile over all
// budgets, the approximation-space quasi-norm, the dyadic representation and
// empirical Jackson/Bernstein constants.
//
// Reduction used throughout: f is a lattice, so for a fixed support Gamma the
// best approximant is s restricted to Gamma and
//   sigma_nu(t, s) = min_{nu(Gamma) <= t} || s restricted to the complement ||_f.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rna/dyadic.hpp"
#include "rna/lorentz.hpp"
#include "rna/sequence.hpp"
#include "rna/spaces.hpp"

namespace rna {

enum class Solver { brute, knapsack, greedy };

Solver parse_solver(std::string_view name);
std::string to_string(Solver solver);

/// knapsack for additive error norms, brute for small supports, greedy otherwise.
Solver default_solver(const SpaceParams& f, std::size_t support_size);

inline constexpr std::size_t kBruteForceLimit = 20;

struct ApproxParams {
  double xi = 1.0;   // rate, > 0
  double mu = 1.0;   // (0, inf]
  SpaceParams f;     // error space
  MeasureSpec nu;
  void validate() const;
};

struct Approximation {
  double error = 0.0;
  std::vector<DyadicCube> support;  // kept cubes
  double mass = 0.0;                // nu(support)
  bool certified_optimal = true;    // false for greedy or a truncated search
  std::size_t nodes = 0;            // search nodes visited
};

/// Exact sigma_nu(t, s) by exhaustive enumeration (|supp| <= 20) or by
/// branch and bound on the additive form (p = q). Throws CapabilityError when
/// the mode cannot handle the parameters.
Approximation sigma_exact(const CoeffSeq& s, double budget, const ApproxParams& params, Solver mode);

/// Cubes in decreasing |u_Q s_Q| order, each admitted if it still fits the budget.
Approximation sigma_greedy(const CoeffSeq& s, double budget, const ApproxParams& params,
                           const Weighting& u = {});

/// u_Q = ||e_Q||_f / nu(Q)^{1/p}: ranks cubes by error reduction per unit of budget.
Weighting density_weighting(const ApproxParams& params);

/// sigma_nu(., s) as a right-continuous step function: errors[i] on
/// [breakpoints[i], breakpoints[i+1]); breakpoints.front() = 0,
/// breakpoints.back() = nu(supp s), errors.back() = 0.
struct SigmaProfile {
  std::vector<double> breakpoints;
  std::vector<double> errors;
  bool exact = true;  // false for the greedy upper envelope

  double operator()(double t) const;
};

/// brute: all subsets; knapsack: Pareto frontier of (kept mass, kept weight);
/// greedy: prefixes of the greedy order (an upper bound of sigma).
SigmaProfile sigma_profile(const CoeffSeq& s, const ApproxParams& params, Solver solver,
                           const Weighting& u = {});

/// (int_0^inf [t^xi sigma(t)]^mu dt/t)^{1/mu}, exact on the step profile.
double approx_norm(const SigmaProfile& profile, double xi, double mu);
double approx_norm(const CoeffSeq& s, const ApproxParams& params, Solver solver);

/// (ln 2 sum_k [2^{k xi} sigma(2^k)]^mu)^{1/mu} with closed-form tails;
/// sup_k 2^{k xi} sigma(2^k) for mu = inf. Lies within [2^-xi, 2^xi] of the
/// integral form.
double approx_norm_dyadic(const SigmaProfile& profile, double xi, double mu);

struct DecompositionPiece {
  int k = 0;       // s_k lies in Sigma_{2^k, nu}
  CoeffSeq piece;
};

struct Decomposition {
  std::vector<DecompositionPiece> pieces;  // nonzero pieces, increasing k
  double score = 0.0;                      // (sum_k [2^{k xi} ||s_k||_f]^mu)^{1/mu}
};

/// s = sum_k s_k with s_k = phi_k - phi_{k-1}, phi_k the solver's best
/// approximant at budget 2^{k-1}.
Decomposition decompose(const CoeffSeq& s, const ApproxParams& params, Solver solver);

/// sup over the suite of sup_t t^xi sigma(t) / ||s||_lorentz. With
/// grid_per_octave = 0 the sup runs over the exact profile breakpoints. A
/// positive value samples sigma at budgets nu_min 2^{m/G} instead (no profile
/// needed), which is within a factor 2^{xi/G} below the exact sup.
double jackson_constant(std::span<const CoeffSeq> suite, const ApproxParams& params,
                        const LorentzParams& lorentz, Solver solver, const Weighting& greedy_u = {},
                        int grid_per_octave = 0);

/// sup over the suite of ||s||_lorentz / (nu(supp s)^xi ||s||_f).
double bernstein_constant(std::span<const CoeffSeq> suite, const ApproxParams& params,
                          const LorentzParams& lorentz);

}  // namespace rna
