#pragma once

// Subcommands of the `rna` tool. Each one declares its config schema and turns
// a validated Config into report rows; the executable only handles flags,
// output and exit codes.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rna/config.hpp"
#include "rna/report.hpp"

namespace rna {

struct Subcommand {
  std::string name;
  std::string summary;
  std::vector<ConfigKey> schema;
  std::function<std::vector<ReportRow>(const Config&, std::uint64_t seed)> run;
};

const std::vector<Subcommand>& subcommands();
/// nullptr when unknown.
const Subcommand* find_subcommand(const std::string& name);

/// Loads the config (or an empty one), runs, sorts rows by experiment id.
/// Throws ConfigError / ParseError / ContractViolation for usage problems.
std::vector<ReportRow> run_subcommand(const Subcommand& cmd, const Config& config, std::uint64_t seed);

}  // namespace rna
