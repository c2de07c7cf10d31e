#include "rna/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rna/errors.hpp"

namespace rna {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_int(const std::string& s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string range_text(double lo, double hi) {
  std::ostringstream os;
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

SpaceParams parse_space(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ContractViolation("space spec needs 'tl:' or 'besov:' prefix: " + spec);
  const std::string family = trim(spec.substr(0, colon));
  SpaceParams f;
  if (family == "tl")
    f.kind = SpaceKind::triebel_lizorkin;
  else if (family == "besov")
    f.kind = SpaceKind::besov;
  else
    throw ContractViolation("unknown space family '" + family + "'");
  f.d = dim;
  bool seen_s = false, seen_p = false, seen_q = false;
  for (const std::string& item : split_list(spec.substr(colon + 1))) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ContractViolation("space spec item without '=': " + item);
    const std::string key = trim(item.substr(0, eq));
    const auto v = to_double(trim(item.substr(eq + 1)));
    if (!v) throw ContractViolation("space spec: bad number in '" + item + "'");
    if (key == "s" && !seen_s) {
      f.s = *v;
      seen_s = true;
    } else if (key == "p" && !seen_p) {
      f.p = *v;
      seen_p = true;
    } else if (key == "q" && !seen_q) {
      f.q = *v;
      seen_q = true;
    } else {
      throw ContractViolation("space spec: unexpected or repeated key '" + key + "'");
    }
  }
  if (!seen_s || !seen_p || !seen_q) throw ContractViolation("space spec needs s, p and q: " + spec);
  f.validate();
  return f;
}

Config Config::parse(std::istream& in, const std::vector<ConfigKey>& schema, std::filesystem::path base_dir) {
  Config c;
  c.base_dir_ = std::move(base_dir);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (std::none_of(schema.begin(), schema.end(), [&](const ConfigKey& k) { return k.name == key; }))
      throw ConfigError("unknown key '" + key + "'", line);
    if (c.entries_.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    c.entries_[key] = {value, line};
  }
  return c;
}

Config Config::load(const std::filesystem::path& path, const std::vector<ConfigKey>& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string(), 0);
  return parse(in, schema, path.parent_path());
}

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void Config::fail(const std::string& key, const std::string& why) const {
  const Entry* e = find(key);
  throw ConfigError("'" + key + "' " + why, e ? e->line : 0);
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

std::string Config::text(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) fail(key, "is required");
  return e->value;
}

std::filesystem::path Config::path(const std::string& key) const {
  std::filesystem::path p = text(key);
  if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
  return p;
}

std::optional<double> Config::maybe_number(const std::string& key, double lo, double hi) const {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  const auto v = to_double(e->value);
  if (!v) fail(key, "is not a number: " + e->value);
  if (!(*v >= lo && *v <= hi)) fail(key, "= " + e->value + " outside " + range_text(lo, hi));
  return v;
}

double Config::number(const std::string& key, double fallback, double lo, double hi) const {
  return maybe_number(key, lo, hi).value_or(fallback);
}

double Config::number(const std::string& key, double lo, double hi) const {
  if (!has(key)) fail(key, "is required");
  return *maybe_number(key, lo, hi);
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback, std::int64_t lo, std::int64_t hi) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  const auto v = to_int<std::int64_t>(e->value);
  if (!v) fail(key, "is not an integer: " + e->value);
  if (*v < lo || *v > hi) fail(key, "= " + e->value + " outside " + range_text(lo, hi));
  return *v;
}

std::uint64_t Config::seed(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  const auto v = to_int<std::uint64_t>(e->value);
  if (!v) fail(key, "is not an unsigned 64-bit integer: " + e->value);
  return *v;
}

bool Config::flag(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true") return true;
  if (e->value == "false") return false;
  fail(key, "must be true or false");
}

std::vector<double> Config::numbers(const std::string& key, std::vector<double> fallback, double lo,
                                    double hi) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const std::string& item : split_list(e->value)) {
    const auto v = to_double(item);
    if (!v) fail(key, "has a non-number entry '" + item + "'");
    if (!(*v >= lo && *v <= hi)) fail(key, "entry " + item + " outside " + range_text(lo, hi));
    out.push_back(*v);
  }
  return out;
}

std::vector<std::int64_t> Config::integers(const std::string& key, std::vector<std::int64_t> fallback,
                                           std::int64_t lo, std::int64_t hi) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::vector<std::int64_t> out;
  for (const std::string& item : split_list(e->value)) {
    const auto v = to_int<std::int64_t>(item);
    if (!v) fail(key, "has a non-integer entry '" + item + "'");
    if (*v < lo || *v > hi) fail(key, "entry " + item + " outside " + range_text(lo, hi));
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> Config::words(const std::string& key, std::vector<std::string> fallback) const {
  const Entry* e = find(key);
  return e ? split_list(e->value) : fallback;
}

SpaceParams Config::space(const std::string& key, int dim) const { return space(key, text(key), dim); }

SpaceParams Config::space(const std::string& key, const std::string& fallback, int dim) const {
  try {
    return parse_space(text(key, fallback), dim);
  } catch (const ContractViolation& e) {
    fail(key, e.what());
  }
}

WeightFn Config::weight(const std::string& key, const std::string& fallback) const {
  try {
    return WeightFn::parse(text(key, fallback));
  } catch (const std::exception& e) {
    fail(key, e.what());
  }
}

}  // namespace rna
