#pragma once

// Triebel-Lizorkin f^s_{p,q} and Besov b^s_{p,q} sequence quasi-norms on
// finite-support sequences.
//
//   ||s||_{f^s_{p,q}} = || [ sum_Q (|Q|^{-s/d-1/2} |s_Q| chi_Q)^q ]^{1/q} ||_{L^p}
//   ||s||_{b^s_{p,q}} = [ sum_j ( sum_{|Q|=2^{-jd}} (|Q|^{-s/d+1/p-1/2} |s_Q|)^p )^{q/p} ]^{1/q}
//
// The TL integrand is constant on the regions of the containment forest of the
// support, so both norms are computed exactly up to rounding.

#include <limits>
#include <optional>
#include <string>

#include "rna/dyadic.hpp"
#include "rna/lorentz.hpp"
#include "rna/sequence.hpp"

namespace rna {

enum class SpaceKind { triebel_lizorkin, besov };

struct SpaceParams {
  static constexpr double infinity = std::numeric_limits<double>::infinity();

  SpaceKind kind = SpaceKind::triebel_lizorkin;
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  int d = 1;

  static SpaceParams tl(double s, double p, double q, int d) { return {SpaceKind::triebel_lizorkin, s, p, q, d}; }
  static SpaceParams besov(double s, double p, double q, int d) { return {SpaceKind::besov, s, p, q, d}; }

  /// Exponent of the rho-power triangle inequality, min(1, p, q).
  double rho() const noexcept;
  /// ||s||^p is a sum of per-cube terms (p = q < inf).
  bool additive() const noexcept;
  void validate() const;
  std::string describe() const;
};

/// ||e_Q|| = |Q|^{-s/d+1/p-1/2}, identical for both scales.
double atom_norm(const DyadicCube& q, const SpaceParams& params);

double tl_norm(const CoeffSeq& seq, const SpaceParams& params);
double besov_norm(const CoeffSeq& seq, const SpaceParams& params);
/// Dispatch on params.kind.
double space_norm(const CoeffSeq& seq, const SpaceParams& params);

/// For additive spaces, ||s||^p = sum_Q additive_term(Q, s_Q).
double additive_term(const DyadicCube& q, double value, const SpaceParams& params);

/// u_Q = ||e_Q||_{f2} for a normalisation space f2.
struct WeightSeq {
  SpaceParams generator;
  double operator()(const DyadicCube& q) const { return atom_norm(q, generator); }
  Weighting as_weighting() const { return [g = generator](const DyadicCube& q) { return atom_norm(q, g); }; }
};

double weight_of(const DyadicCube& q, const WeightSeq& w);

struct LorentzBesovCheck {
  double lhs = 0.0;    // ||s||_{l^{tau,tau}(u, nu_alpha)}
  double rhs = 0.0;    // ||s||_{b^gamma_{tau,tau}}
  bool ok = false;
  double alpha = 0.0;  // p1((s2-s1)/d - 1/p2) + 1
  double gamma = 0.0;  // s1 + d(1/tau - 1/p1)(1 - alpha)
};

/// Evaluates both sides of l^{tau,tau}(u, nu_alpha) = b^gamma_{tau,tau} by
/// independent code paths (rearrangement vs. scale-wise sums); ok when
/// |lhs - rhs| <= 1e-10 max(lhs, rhs, 1).
LorentzBesovCheck lorentz_equals_besov_check(const CoeffSeq& seq, double s1, double p1,
                                             const SpaceParams& f2, double tau);

}  // namespace rna
