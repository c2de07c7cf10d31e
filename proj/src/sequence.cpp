#include "rna/sequence.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rna/errors.hpp"

namespace rna {

CoeffSeq CoeffSeq::atom(const DyadicCube& q, double value) {
  CoeffSeq s(q.dim());
  s.set(q, value);
  return s;
}

void CoeffSeq::set(const DyadicCube& q, double value) {
  if (q.dim() != dim_) throw ContractViolation("cube dimension does not match sequence");
  if (!std::isfinite(value)) throw ContractViolation("non-finite coefficient on " + to_string(q));
  if (value == 0.0)
    entries_.erase(q);
  else
    entries_[q] = value;
}

void CoeffSeq::add(const DyadicCube& q, double value) { set(q, (*this)[q] + value); }

double CoeffSeq::operator[](const DyadicCube& q) const {
  auto it = entries_.find(q);
  return it == entries_.end() ? 0.0 : it->second;
}

std::vector<DyadicCube> CoeffSeq::support() const {
  std::vector<DyadicCube> out;
  out.reserve(entries_.size());
  for (const auto& [q, v] : entries_) out.push_back(q);
  return out;
}

CubeSet CoeffSeq::support_set() const { return CubeSet(dim_, support()); }

CoeffSeq CoeffSeq::restricted(const CubeSet& keep) const {
  CoeffSeq out(dim_);
  for (const auto& [q, v] : entries_)
    if (keep.contains(q)) out.entries_.emplace(q, v);
  return out;
}

CoeffSeq CoeffSeq::without(const CubeSet& drop) const {
  CoeffSeq out(dim_);
  for (const auto& [q, v] : entries_)
    if (!drop.contains(q)) out.entries_.emplace(q, v);
  return out;
}

CoeffSeq CoeffSeq::scaled(double c) const {
  CoeffSeq out(dim_);
  for (const auto& [q, v] : entries_) out.set(q, c * v);
  return out;
}

CoeffSeq operator+(const CoeffSeq& a, const CoeffSeq& b) {
  CoeffSeq out = a;
  for (const auto& [q, v] : b) out.add(q, v);
  return out;
}

CoeffSeq operator-(const CoeffSeq& a, const CoeffSeq& b) {
  CoeffSeq out = a;
  for (const auto& [q, v] : b) out.add(q, -v);
  return out;
}

bool CoeffSeq::dominated_by(const CoeffSeq& t) const {
  for (const auto& [q, v] : entries_)
    if (std::abs(v) > std::abs(t[q])) return false;
  return true;
}

CoeffSeq read_coeff_seq(std::istream& in, int dim) {
  CoeffSeq out(dim);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    if (static_cast<int>(toks.size()) != dim + 2)
      throw ParseError("expected j, " + std::to_string(dim) + " position(s) and a value, got " +
                           std::to_string(toks.size()) + " fields",
                       lineno);
    std::vector<std::int64_t> ints;
    for (int i = 0; i <= dim; ++i) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(toks[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != toks[i].size()) throw ParseError("expected an integer, got '" + toks[i] + "'", lineno);
      ints.push_back(v);
    }
    double value = 0.0;
    {
      std::size_t used = 0;
      try {
        value = std::stod(toks.back(), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != toks.back().size() || !std::isfinite(value))
        throw ParseError("expected a finite real value, got '" + toks.back() + "'", lineno);
    }
    if (ints[0] < std::numeric_limits<int>::min() || ints[0] > std::numeric_limits<int>::max())
      throw ParseError("scale out of range", lineno);
    DyadicCube q(static_cast<int>(ints[0]), {ints.begin() + 1, ints.end()});
    if (out[q] != 0.0) throw ParseError("duplicate cube", lineno);
    out.set(q, value);
  }
  return out;
}

void write_coeff_seq(std::ostream& out, const CoeffSeq& s) {
  const auto old = out.precision(17);
  for (const auto& [q, v] : s) out << q << ' ' << v << '\n';
  out.precision(old);
}

CoeffSeq normalized_indicator(const CubeSet& cubes, const Weighting& u) {
  CoeffSeq s(cubes.dim());
  for (const auto& q : cubes) s.set(q, u ? 1.0 / u(q) : 1.0);
  return s;
}

}  // namespace rna
