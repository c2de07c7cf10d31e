#pragma once

// Experiment config: `key = value` lines, `#` starts a comment. Every key must
// be declared in the subcommand's schema; values are range-checked when read,
// before any computation starts.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rna/spaces.hpp"
#include "rna/weights.hpp"

namespace rna {

/// Bad config: unknown key, duplicate, wrong type or out of range.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + what : "config: " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

struct ConfigKey {
  std::string name;
  std::string help;  // type and range, shown by --help and in the README
};

class Config {
public:
  Config() = default;

  /// Parses the text and checks every key against `schema`.
  static Config parse(std::istream& in, const std::vector<ConfigKey>& schema,
                      std::filesystem::path base_dir = {});
  static Config load(const std::filesystem::path& path, const std::vector<ConfigKey>& schema);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Override or add a value, e.g. from a command-line flag.
  void set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }

  std::string text(const std::string& key, const std::string& fallback) const;
  std::string text(const std::string& key) const;  // required
  /// Relative paths resolve against the config file's directory.
  std::filesystem::path path(const std::string& key) const;

  /// Value in [lo, hi]; `inf` is accepted when hi is infinite.
  double number(const std::string& key, double fallback, double lo, double hi) const;
  double number(const std::string& key, double lo, double hi) const;  // required
  std::optional<double> maybe_number(const std::string& key, double lo, double hi) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo, std::int64_t hi) const;
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;

  /// Comma-separated lists.
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback, double lo, double hi) const;
  std::vector<std::int64_t> integers(const std::string& key, std::vector<std::int64_t> fallback, std::int64_t lo,
                                     std::int64_t hi) const;
  std::vector<std::string> words(const std::string& key, std::vector<std::string> fallback) const;

  /// `tl:s=0.5,p=2,q=2` or `besov:s=..,p=..,q=..`, dimension supplied separately.
  SpaceParams space(const std::string& key, int dim) const;
  SpaceParams space(const std::string& key, const std::string& fallback, int dim) const;
  /// `power:p=2` or `powerlog:p=2,b=1`.
  WeightFn weight(const std::string& key, const std::string& fallback) const;

private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry* find(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& why) const;

  std::map<std::string, Entry> entries_;
  std::filesystem::path base_dir_;
};

/// Parses a space spec on its own (used by Config::space and the tests).
SpaceParams parse_space(const std::string& spec, int dim);

}  // namespace rna
