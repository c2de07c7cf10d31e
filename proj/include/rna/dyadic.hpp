#pragma once

// Dyadic cubes Q_{j,k} = 2^{-j}([0,1)^d + k), finite cube sets, the measures
// nu_alpha(Q) = |Q|^alpha, and exact integration of functions that are
// constant on the regions of a containment forest.

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rna {

struct DyadicCube {
  int scale = 0;                    // j; side length 2^{-j}
  std::vector<std::int64_t> pos;    // k, length d

  DyadicCube() = default;
  DyadicCube(int j, std::vector<std::int64_t> k) : scale(j), pos(std::move(k)) {}

  int dim() const noexcept { return static_cast<int>(pos.size()); }

  /// log2 |Q| = -j d, exact.
  double log2_volume() const noexcept {
    return -static_cast<double>(scale) * static_cast<double>(dim());
  }

  DyadicCube parent() const;

  /// True when `other` is a (non-strict) sub-cube of *this.
  bool contains(const DyadicCube& other) const;

  /// True when the point x lies in the half-open cube.
  bool contains_point(std::span<const double> x) const;

  /// Dilation by 2^{shift}: j -> j - shift, k unchanged.
  DyadicCube dilated(int shift) const { return {scale - shift, pos}; }

  friend auto operator<=>(const DyadicCube&, const DyadicCube&) = default;
  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

struct DyadicCubeHash {
  std::size_t operator()(const DyadicCube& q) const noexcept;
};

std::ostream& operator<<(std::ostream& os, const DyadicCube& q);
std::string to_string(const DyadicCube& q);

/// |Q| = 2^{-jd}. Throws RangeError when the result would overflow or
/// underflow to a denormal.
double cube_volume(const DyadicCube& q);

/// 2^{e} for a real exponent, with the same range policy as cube_volume.
double checked_exp2(double e);

/// The measure nu_alpha(Q) = |Q|^alpha. alpha = 0 is the counting measure.
struct MeasureSpec {
  double alpha = 0.0;

  double operator()(const DyadicCube& q) const { return checked_exp2(alpha * q.log2_volume()); }
};

/// A finite set of dyadic cubes of a common dimension, without duplicates.
class CubeSet {
public:
  explicit CubeSet(int dim = 1) : dim_(dim) {}
  CubeSet(int dim, std::vector<DyadicCube> cubes);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return cubes_.size(); }
  bool empty() const noexcept { return cubes_.empty(); }

  /// Returns false if the cube was already present.
  bool insert(DyadicCube q);
  bool contains(const DyadicCube& q) const { return index_.count(q) != 0; }

  const std::vector<DyadicCube>& cubes() const noexcept { return cubes_; }
  auto begin() const noexcept { return cubes_.begin(); }
  auto end() const noexcept { return cubes_.end(); }

private:
  int dim_;
  std::vector<DyadicCube> cubes_;
  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> index_;
};

/// Reads one cube per line, `j k1 [k2 ...]`; blank lines and `#` comments are
/// skipped. Throws ParseError carrying the line number.
CubeSet read_cube_set(std::istream& in, int dim);
void write_cube_set(std::ostream& out, const CubeSet& cubes);

/// nu(Gamma) = sum_{Q in Gamma} |Q|^alpha, summed smallest term first.
double nu_measure(const CubeSet& cubes, const MeasureSpec& m);
double nu_measure(std::span<const DyadicCube> cubes, const MeasureSpec& m);

/// S^gamma_Gamma(x) = sum_{Q in Gamma} |Q|^gamma chi_Q(x).
double cube_sum(const CubeSet& cubes, double gamma, std::span<const double> x);

/// (Q^x, Q_x): the biggest and the smallest cube of the set containing x.
std::pair<std::optional<DyadicCube>, std::optional<DyadicCube>>
biggest_smallest_cube(const CubeSet& cubes, std::span<const double> x);

/// Geometric-series constant (1 - 2^{-d|gamma|})^{-1} bounding S^gamma by the
/// extremal cube term.
double cube_sum_constant(int dim, double gamma);

/// Containment forest of a finite cube set: parent = smallest strictly
/// containing cube of the set. Nodes are stored coarse-to-fine so that a
/// parent always precedes its children.
class ContainmentForest {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit ContainmentForest(std::span<const DyadicCube> cubes);

  std::size_t size() const noexcept { return nodes_.size(); }
  const DyadicCube& cube(std::size_t i) const { return nodes_[i].cube; }
  std::size_t parent(std::size_t i) const { return nodes_[i].parent; }
  const std::vector<std::size_t>& children(std::size_t i) const { return nodes_[i].children; }
  const std::vector<std::size_t>& roots() const noexcept { return roots_; }

  /// Position of the input cube `input_index` in node order.
  std::size_t node_of(std::size_t input_index) const { return node_of_input_[input_index]; }

  /// Lebesgue measure of the node cube minus its child cubes.
  double region_measure(std::size_t i) const;

  /// Integral of a function that is constant on every region. `accumulate`
  /// folds the node value into its parent's chain value (the chain value of a
  /// root starts from `identity`); `integrand` maps a chain value to the
  /// constant taken on the region.
  double integrate(std::span<const double> node_values, double identity,
                   const std::function<double(double, double)>& accumulate,
                   const std::function<double(double)>& integrand) const;

private:
  struct Node {
    DyadicCube cube;
    std::size_t parent = npos;
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> node_of_input_;
};

/// (int [sum_Q a_Q chi_Q(x)]^theta dx)^{1/outer_p}, exactly, via the forest.
/// Throws ContractViolation on negative coefficients.
double integrate_power_of_cube_sum(std::span<const std::pair<DyadicCube, double>> terms,
                                   double theta, double outer_p);

/// Same with the pointwise maximum of the a_Q in place of the sum.
double integrate_power_of_cube_max(std::span<const std::pair<DyadicCube, double>> terms,
                                   double theta, double outer_p);

}  // namespace rna
