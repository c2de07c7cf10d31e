#include "rna/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rna/errors.hpp"

namespace rna {

DyadicCube DyadicCube::parent() const {
  DyadicCube p;
  p.scale = scale - 1;
  p.pos.reserve(pos.size());
  for (auto k : pos) p.pos.push_back(k >> 1);  // floor division
  return p;
}

bool DyadicCube::contains(const DyadicCube& other) const {
  if (other.dim() != dim() || other.scale < scale) return false;
  const int shift = other.scale - scale;
  if (shift >= 63) {
    // Only reachable with absurd scale gaps; fall back to walking up.
    DyadicCube q = other;
    while (q.scale > scale) q = q.parent();
    return q.pos == pos;
  }
  for (std::size_t i = 0; i < pos.size(); ++i)
    if ((other.pos[i] >> shift) != pos[i]) return false;
  return true;
}

bool DyadicCube::contains_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const double scaled = std::ldexp(x[i], scale);
    if (std::floor(scaled) != static_cast<double>(pos[i])) return false;
  }
  return true;
}

std::size_t DyadicCubeHash::operator()(const DyadicCube& q) const noexcept {
  std::size_t h = std::hash<int>{}(q.scale);
  for (auto k : q.pos) h ^= std::hash<std::int64_t>{}(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::ostream& operator<<(std::ostream& os, const DyadicCube& q) {
  os << q.scale;
  for (auto k : q.pos) os << ' ' << k;
  return os;
}

std::string to_string(const DyadicCube& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

double checked_exp2(double e) {
  if (!std::isfinite(e) || e > 1023.0 || e < -1022.0)
    throw RangeError("2^" + std::to_string(e) + " is outside the double exponent range");
  return std::exp2(e);
}

double cube_volume(const DyadicCube& q) { return checked_exp2(q.log2_volume()); }

CubeSet::CubeSet(int dim, std::vector<DyadicCube> cubes) : dim_(dim) {
  for (auto& q : cubes) insert(std::move(q));
}

bool CubeSet::insert(DyadicCube q) {
  if (q.dim() != dim_)
    throw ContractViolation("cube " + to_string(q) + " has dimension " + std::to_string(q.dim()) +
                            ", set has " + std::to_string(dim_));
  auto [it, fresh] = index_.emplace(q, cubes_.size());
  if (fresh) cubes_.push_back(std::move(q));
  return fresh;
}

CubeSet read_cube_set(std::istream& in, int dim) {
  CubeSet out(dim);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<long long> ints;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'", lineno);
      }
      if (used != tok.size()) throw ParseError("expected an integer, got '" + tok + "'", lineno);
      ints.push_back(v);
    }
    if (ints.empty()) continue;
    if (static_cast<int>(ints.size()) != dim + 1)
      throw ParseError("expected " + std::to_string(dim + 1) + " integers (j k1..kd), got " +
                           std::to_string(ints.size()),
                       lineno);
    if (ints[0] < std::numeric_limits<int>::min() || ints[0] > std::numeric_limits<int>::max())
      throw ParseError("scale out of range", lineno);
    DyadicCube q(static_cast<int>(ints[0]), {ints.begin() + 1, ints.end()});
    if (!out.insert(std::move(q))) throw ParseError("duplicate cube", lineno);
  }
  return out;
}

void write_cube_set(std::ostream& out, const CubeSet& cubes) {
  for (const auto& q : cubes) out << q << '\n';
}

double nu_measure(std::span<const DyadicCube> cubes, const MeasureSpec& m) {
  std::vector<double> terms;
  terms.reserve(cubes.size());
  for (const auto& q : cubes) terms.push_back(m(q));
  std::sort(terms.begin(), terms.end());
  // Runs of equal masses (cubes of one scale) enter as count * mass, so a
  // family of N equal cubes has mass N nu(Q) with a single rounding.
  double total = 0.0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    total += static_cast<double>(j - i) * terms[i];
    i = j;
  }
  return total;
}

double nu_measure(const CubeSet& cubes, const MeasureSpec& m) {
  return nu_measure(std::span<const DyadicCube>(cubes.cubes()), m);
}

double cube_sum(const CubeSet& cubes, double gamma, std::span<const double> x) {
  std::vector<double> terms;
  for (const auto& q : cubes)
    if (q.contains_point(x)) terms.push_back(checked_exp2(gamma * q.log2_volume()));
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

std::pair<std::optional<DyadicCube>, std::optional<DyadicCube>>
biggest_smallest_cube(const CubeSet& cubes, std::span<const double> x) {
  std::optional<DyadicCube> big, small;
  for (const auto& q : cubes) {
    if (!q.contains_point(x)) continue;
    if (!big || q.scale < big->scale) big = q;
    if (!small || q.scale > small->scale) small = q;
  }
  return {big, small};
}

double cube_sum_constant(int dim, double gamma) {
  if (gamma == 0.0) throw ContractViolation("cube_sum_constant needs gamma != 0");
  return 1.0 / (1.0 - std::exp2(-dim * std::abs(gamma)));
}

ContainmentForest::ContainmentForest(std::span<const DyadicCube> cubes) {
  std::vector<std::size_t> order(cubes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cubes[a].scale < cubes[b].scale; });

  nodes_.reserve(cubes.size());
  node_of_input_.assign(cubes.size(), npos);
  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> where;
  where.reserve(cubes.size() * 2);
  const int coarsest = cubes.empty() ? 0 : cubes[order.front()].scale;

  for (std::size_t idx : order) {
    const DyadicCube& q = cubes[idx];
    if (where.count(q)) throw ContractViolation("duplicate cube " + to_string(q) + " in forest input");
    Node node{q, npos, {}};
    // Walk up the ancestor chain until an ancestor in the set is met.
    DyadicCube a = q;
    while (a.scale > coarsest) {
      a = a.parent();
      if (auto it = where.find(a); it != where.end()) {
        node.parent = it->second;
        break;
      }
    }
    const std::size_t id = nodes_.size();
    if (node.parent == npos)
      roots_.push_back(id);
    else
      nodes_[node.parent].children.push_back(id);
    where.emplace(q, id);
    node_of_input_[idx] = id;
    nodes_.push_back(std::move(node));
  }
}

double ContainmentForest::region_measure(std::size_t i) const {
  const Node& n = nodes_[i];
  // Child volumes are powers of two below |Q|; summing them smallest first
  // stays exact while the scale spread is below the mantissa width.
  std::vector<double> child;
  child.reserve(n.children.size());
  for (auto c : n.children) child.push_back(cube_volume(nodes_[c].cube));
  std::sort(child.begin(), child.end());
  double covered = 0.0;
  for (double v : child) covered += v;
  return cube_volume(n.cube) - covered;
}

double ContainmentForest::integrate(std::span<const double> node_values, double identity,
                                    const std::function<double(double, double)>& accumulate,
                                    const std::function<double(double)>& integrand) const {
  std::vector<double> chain(nodes_.size());
  std::vector<double> pieces;
  pieces.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double above = nodes_[i].parent == npos ? identity : chain[nodes_[i].parent];
    chain[i] = accumulate(above, node_values[i]);
    const double meas = region_measure(i);
    if (meas > 0.0) pieces.push_back(integrand(chain[i]) * meas);
  }
  std::sort(pieces.begin(), pieces.end());
  double total = 0.0;
  for (double p : pieces) total += p;
  return total;
}

namespace {

double integrate_terms(std::span<const std::pair<DyadicCube, double>> terms, double theta,
                       double outer_p, bool use_max) {
  if (!(theta > 0.0) || !(outer_p > 0.0))
    throw ContractViolation("integrate_power_of_cube_sum needs theta > 0 and outer_p > 0");
  std::vector<DyadicCube> cubes;
  cubes.reserve(terms.size());
  for (const auto& [q, a] : terms) {
    if (!(a >= 0.0)) throw ContractViolation("negative coefficient on cube " + to_string(q));
    cubes.push_back(q);
  }
  if (cubes.empty()) return 0.0;
  ContainmentForest forest(cubes);
  std::vector<double> values(cubes.size());
  for (std::size_t i = 0; i < terms.size(); ++i) values[forest.node_of(i)] = terms[i].second;
  auto sum = [](double acc, double v) { return acc + v; };
  auto max = [](double acc, double v) { return std::max(acc, v); };
  const double integral =
      use_max ? forest.integrate(values, 0.0, max, [&](double c) { return std::pow(c, theta); })
              : forest.integrate(values, 0.0, sum, [&](double c) { return std::pow(c, theta); });
  return std::pow(integral, 1.0 / outer_p);
}

}  // namespace

double integrate_power_of_cube_sum(std::span<const std::pair<DyadicCube, double>> terms,
                                   double theta, double outer_p) {
  return integrate_terms(terms, theta, outer_p, false);
}

double integrate_power_of_cube_max(std::span<const std::pair<DyadicCube, double>> terms,
                                   double theta, double outer_p) {
  return integrate_terms(terms, theta, outer_p, true);
}

}  // namespace rna
