// rna: command-line runner. Exit codes: 0 all rows pass, 1 a property
// failed, 2 usage or config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rna/cli.hpp"
#include "rna/errors.hpp"
#include "rna/verify.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
};

std::string schema_text(const rna::Subcommand& cmd) {
  std::string s = "Config keys (key = value, # comments):\n";
  for (const auto& k : cmd.schema) s += "  " + k.name + ": " + k.help + "\n";
  return s;
}

int run(const rna::Subcommand& cmd, const Options& opt) {
  rna::Config config = opt.config.empty() ? rna::Config{} : rna::Config::load(opt.config, cmd.schema);
  const std::uint64_t seed = opt.seed ? *opt.seed : config.seed("seed", rna::kDefaultSeed);
  const auto rows = rna::run_subcommand(cmd, config, seed);

  auto write = [&](std::ostream& out) {
    if (opt.format == "json")
      rna::write_json(out, rows);
    else
      rna::write_csv(out, rows);
  };
  if (opt.out.empty()) {
    write(std::cout);
  } else {
    std::filesystem::create_directories(opt.out);
    const auto path = std::filesystem::path(opt.out) / (cmd.name + "." + opt.format);
    std::ofstream out(path);
    if (!out) throw rna::ConfigError("cannot write " + path.string(), 0);
    write(out);
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  std::cerr << cmd.name << ": " << rows.size() << " rows, " << failed << " failed\n";
  return failed == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted nonlinear approximation in dyadic sequence spaces"};
  app.require_subcommand(1);
  Options opt;
  for (const auto& cmd : rna::subcommands()) {
    CLI::App* sc = app.add_subcommand(cmd.name, cmd.summary);
    sc->add_option("--config", opt.config, "key = value config file");
    sc->add_option("--out", opt.out, "directory for <subcommand>.<format>; default stdout");
    sc->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sc->add_option("--seed", opt.seed, "u64 seed for randomized parts");
    sc->footer(schema_text(cmd));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const rna::Subcommand* cmd = nullptr;
  for (const auto* sc : app.get_subcommands()) cmd = rna::find_subcommand(sc->get_name());
  if (!cmd) return kUsage;

  try {
    return run(*cmd, opt);
  } catch (const rna::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const rna::ParseError& e) {
    std::cerr << "error: input " << e.what() << "\n";
  } catch (const rna::ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const rna::CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const rna::RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    // Numerical trouble during a run counts as a failed property.
    std::cerr << "failure: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
