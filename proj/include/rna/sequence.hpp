#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "rna/dyadic.hpp"

namespace rna {

/// Finite-support coefficient sequence s = {s_Q}. Zero entries are never
/// stored, so size() is the support size.
class CoeffSeq {
public:
  using Map = std::map<DyadicCube, double>;

  explicit CoeffSeq(int dim = 1) : dim_(dim) {}

  /// e_Q scaled by `value`.
  static CoeffSeq atom(const DyadicCube& q, double value = 1.0);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  void set(const DyadicCube& q, double value);
  void add(const DyadicCube& q, double value);
  double operator[](const DyadicCube& q) const;

  const Map& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  std::vector<DyadicCube> support() const;
  CubeSet support_set() const;

  /// Entries on `keep` only / everything but `keep`.
  CoeffSeq restricted(const CubeSet& keep) const;
  CoeffSeq without(const CubeSet& drop) const;

  CoeffSeq scaled(double c) const;
  friend CoeffSeq operator+(const CoeffSeq& a, const CoeffSeq& b);
  friend CoeffSeq operator-(const CoeffSeq& a, const CoeffSeq& b);

  /// |s_Q| <= |t_Q| for every Q.
  bool dominated_by(const CoeffSeq& t) const;

  friend bool operator==(const CoeffSeq&, const CoeffSeq&) = default;

private:
  int dim_;
  Map entries_;
};

/// Reads `j k1 [k2 ...] value` lines (blank lines and `#` comments skipped).
CoeffSeq read_coeff_seq(std::istream& in, int dim);
void write_coeff_seq(std::ostream& out, const CoeffSeq& s);

/// Strictly positive weight sequence u = {u_Q}. An empty function means u = 1.
using Weighting = std::function<double(const DyadicCube&)>;

/// 1_{Gamma,u} = sum_{Q in Gamma} e_Q / u_Q.
CoeffSeq normalized_indicator(const CubeSet& cubes, const Weighting& u);

}  // namespace rna
