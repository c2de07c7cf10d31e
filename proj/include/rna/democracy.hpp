#pragma once

// Democracy of normalised indicators: ||sum_{Q in Gamma} e_Q / ||e_Q||_{f2}||_{f1}
// against nu_alpha(Gamma)^{1/p1}, over structured and random cube families.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rna/dyadic.hpp"
#include "rna/spaces.hpp"

namespace rna {

struct DemocracyCase {
  SpaceParams f1;  // error space, Triebel-Lizorkin
  SpaceParams f2;  // normalisation space
  double alpha = 0.0;

  /// p1((s2 - s1)/d - 1/p2) + 1.
  double predicted_alpha() const;
  /// beta with ||e_Q||_{f2}^{-1} |Q|^{-s1/d-1/2} = |Q|^beta, i.e. (s2 - s1)/d - 1/p2.
  double coefficient_exponent() const;
  void validate() const;
};

struct Admissibility {
  bool admissible = false;
  std::string reason;
};

Admissibility predicted_admissible(const DemocracyCase& c);

enum class FamilyKind { disjoint_grid, tower, shifted_row, random_mixed };

std::string to_string(FamilyKind kind);

/// Gamma_{N,L}: the N^d cubes 2^l([0,1)^d + k), k in [0,N)^d, L = 2^l.
CubeSet disjoint_grid(int d, std::int64_t n, int l);
/// Gamma_N: every dyadic cube inside [0,1)^d at scales 0..N-1, sum_{j<N} 2^{jd} cubes.
CubeSet tower(int d, int n);
/// The N unit cubes [0,1)^d + j e_1, j = 0..N-1.
CubeSet shifted_row(int d, std::int64_t n);
/// n distinct cubes with scales uniform in [-J, J], lying in [0, 2^J)^d.
CubeSet random_mixed(int d, std::size_t n, int J, std::mt19937_64& rng);

/// Exact TL norm of the normalised indicator 1_{Gamma,u}, u_Q = ||e_Q||_{f2}.
double democracy_value(const CubeSet& gamma, const DemocracyCase& c);

/// L^{d(gamma/q1 + 1/p1)} N^{d/p1} with gamma = beta q1; L^{d(beta + 1/p1)} N^{d/p1} for q1 = inf.
double disjoint_grid_closed_form(const DemocracyCase& c, std::int64_t n, int l);
/// (L^alpha N)^d.
double disjoint_grid_mass(const DemocracyCase& c, std::int64_t n, int l);
/// Tower value without enumerating the cubes: every x in [0,1)^d meets one
/// cube per scale, so the value is (sum_{j<N} 2^{-j d beta q1})^{1/q1}.
double tower_value(const DemocracyCase& c, int n);
/// sum_{j<N} 2^{jd(1-alpha)}; equals N for alpha = 1.
double tower_mass(const DemocracyCase& c, int n);

struct DemocracyRow {
  FamilyKind family = FamilyKind::disjoint_grid;
  std::int64_t n = 0;
  double l = 0.0;  // log2 L for grids, J for random sets, 0 otherwise
  double mass = 0.0;
  double value = 0.0;
  double ratio = 0.0;  // value / mass^{1/p1}
};

struct SweepSpec {
  std::vector<FamilyKind> families;
  std::vector<std::int64_t> sizes;
  std::vector<int> grid_log_sides{0};
  int random_scale_range = 4;
  std::size_t random_draws = 1;
  std::uint64_t seed = 0;
};

/// One row per (family, size[, L or draw]). Towers use the level-wise evaluator.
std::vector<DemocracyRow> democracy_ratio_sweep(const DemocracyCase& c, const SweepSpec& spec);

/// max ratio / min ratio.
double ratio_spread(const std::vector<DemocracyRow>& rows);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rna
