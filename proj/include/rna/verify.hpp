#pragma once

// The acceptance suites. Each returns report rows; a criterion passes when all
// of its rows pass. Shared by the acceptance test and `rna verify-all`.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rna/approx.hpp"
#include "rna/democracy.hpp"
#include "rna/report.hpp"
#include "rna/sequence.hpp"

namespace rna {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct VerifyConfig {
  std::uint64_t seed = kDefaultSeed;
  /// Added to every democracy-suite alpha. Nonzero values are a negative
  /// control: the democracy suite must then fail.
  double alpha_offset = 0.0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<ReportRow> rows;
  double wall_ms = 0.0;
};

/// Random finite sequence: n distinct cubes in dimension d with scales in
/// [-J, J] and positions in [0, 2^J)^d, nonzero coefficients of both signs
/// with magnitudes spread over several decades.
CoeffSeq random_sequence(std::mt19937_64& rng, int d, std::size_t n, int J);

CriterionResult verify_atom_norms(const VerifyConfig& cfg);            // 1
CriterionResult verify_democracy_closed_forms(const VerifyConfig& cfg);  // 2
CriterionResult verify_admissibility(const VerifyConfig& cfg);         // 3
CriterionResult verify_lorentz_besov(const VerifyConfig& cfg);         // 4
CriterionResult verify_sigma_oracle(const VerifyConfig& cfg);          // 5
CriterionResult verify_approx_norm_forms(const VerifyConfig& cfg);     // 6
CriterionResult verify_jackson_bernstein(const VerifyConfig& cfg);     // 7
CriterionResult verify_representation(const VerifyConfig& cfg);        // 8
CriterionResult verify_weight_class(const VerifyConfig& cfg);          // 9
CriterionResult verify_lattice_axioms(const VerifyConfig& cfg);        // 10

using CriterionFn = std::function<CriterionResult(const VerifyConfig&)>;
const std::vector<CriterionFn>& all_criteria();

std::vector<CriterionResult> verify_all(const VerifyConfig& cfg);

// Building blocks of criterion 7, reused by the jackson / bernstein subcommands.

struct ConstantSeries {
  std::vector<std::size_t> sizes;
  std::vector<double> constants;
};

/// Constants over random suites of each support size, cubes at scales in
/// [-J, J]. The Jackson side needs the exact sigma profile, whose Pareto
/// frontier stays small when the masses |Q|^alpha share a dyadic lattice
/// (alpha d an integer).
ConstantSeries jackson_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes,
                              std::size_t per_size, int J, std::uint64_t seed);
ConstantSeries bernstein_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes,
                                std::size_t per_size, int J, std::uint64_t seed);
/// Constants on the single indicator of Gamma_{N,1/N} (d = 1) for each N.
ConstantSeries jackson_indicator_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes);
ConstantSeries bernstein_indicator_series(const DemocracyCase& c, double xi, std::span<const std::size_t> sizes);

/// Two-sided bound [lo, hi] of score / approx_norm for exact decompositions.
std::pair<double, double> representation_bounds(double xi, double mu, double rho);

}  // namespace rna
