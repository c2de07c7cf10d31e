#pragma once

// Shared generators and brute-force oracles for the unit tests. The oracles
// deliberately avoid the library's forest and rearrangement code.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rna/dyadic.hpp"
#include "rna/sequence.hpp"

namespace testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Cubes inside [0, 2^box)^d with scales j in [-box, jmax], so that a uniform
// grid of side 2^-jmax resolves every cube.
inline std::vector<rna::DyadicCube> random_cubes(std::mt19937_64& rng, int d, int n, int box, int jmax) {
  std::vector<rna::DyadicCube> out;
  rna::CubeSet seen(d);
  while (static_cast<int>(out.size()) < n) {
    const int j = uniform_int(rng, -box, jmax);
    std::vector<std::int64_t> k(static_cast<std::size_t>(d));
    for (auto& x : k) x = uniform_int(rng, 0, static_cast<int>((std::int64_t{1} << (box + j)) - 1));
    rna::DyadicCube q(j, k);
    if (seen.insert(q)) out.push_back(q);
  }
  return out;
}

inline rna::CoeffSeq random_seq(std::mt19937_64& rng, int d, int n, int box, int jmax) {
  rna::CoeffSeq s(d);
  for (const auto& q : random_cubes(rng, d, n, box, jmax)) {
    const double v = std::pow(10.0, uniform(rng, -1.0, 1.0));
    s.set(q, uniform_int(rng, 0, 1) ? v : -v);
  }
  return s;
}

// Midpoint rule on the uniform grid of side 2^-jmax over [0, 2^box)^d. Exact
// (up to rounding) for integrands constant on every grid cell, which holds
// for cube-indicator combinations at scales <= jmax.
template <class F>
double grid_integral(int d, int box, int jmax, F&& value_at) {
  const std::int64_t per_axis = std::int64_t{1} << (box + jmax);
  const double h = std::ldexp(1.0, -jmax);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  double total = 0.0;
  for (;;) {
    for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) * h;
    total += value_at(x);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return total * std::pow(h, d);
}

}  // namespace testing
