#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "rna/cli.hpp"
#include "rna/config.hpp"
#include "rna/errors.hpp"
#include "support.hpp"

using namespace rna;
namespace fs = std::filesystem;

namespace {

const std::vector<ConfigKey> kSchema = {{"a", ""}, {"b", ""}, {"list", ""}, {"space", ""}, {"flag", ""},
                                        {"seed", ""}, {"input", ""}, {"eta", ""}};

Config parse(const std::string& text, const fs::path& base = {}) {
  std::istringstream in(text);
  return Config::parse(in, kSchema, base);
}

int config_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

struct Run {
  int code = -1;
  std::string out;
};

// Runs the tool with stderr discarded and returns its exit code and stdout.
Run run_tool(const std::string& args) {
  const std::string cmd = std::string("\"") + RNA_TOOL + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rna_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

const fs::path kData = RNA_TEST_DATA;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

// Drops the trailing wall_ms column of every line.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST_CASE("config parsing: comments, blanks and typed reads") {
  const Config c = parse("# header\n\na = 1.5   # trailing\nb = inf\nlist = 1, 2,4\nflag = true\nseed = 18446744073709551615\n");
  CHECK(c.number("a", 0.0, 10.0) == 1.5);
  CHECK(std::isinf(c.number("b", 0.0, INFINITY)));
  CHECK(c.integers("list", {}, 0, 10) == std::vector<std::int64_t>{1, 2, 4});
  CHECK(c.flag("flag", false));
  CHECK(c.seed("seed", 0) == 18446744073709551615ull);
  CHECK(c.number("space", 7.0, 0.0, 10.0) == 7.0);
  CHECK_FALSE(c.has("space"));
}

TEST_CASE("config errors carry line numbers") {
  CHECK(config_error_line("a = 1\nnope = 2\n") == 2);
  CHECK(config_error_line("a = 1\n\na = 2\n") == 3);
  CHECK(config_error_line("# c\na 1\n") == 2);
  CHECK(config_error_line("a =\n") == 1);
  CHECK(config_error_line("= 3\n") == 1);

  const Config c = parse("a = 1\nb = 30\nlist = 1,x\nflag = maybe\n");
  try {
    c.number("b", 0.0, 10.0);
    FAIL("range error expected");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("config line 2") == 0);
  }
  CHECK_THROWS_AS(c.numbers("list", {}, 0, 10), ConfigError);
  CHECK_THROWS_AS(c.flag("flag", false), ConfigError);
  CHECK_THROWS_AS(c.integer("a", 0, 2, 5), ConfigError);
  CHECK_THROWS_AS(c.number("space", 0.0, 1.0), ConfigError);  // required, absent
  CHECK_THROWS_AS(Config::load("/nonexistent/rna.cfg", kSchema), ConfigError);
}

TEST_CASE("config paths resolve against the config directory") {
  const Config c = parse("input = data/x.seq\n", "/some/dir");
  CHECK(c.path("input") == fs::path("/some/dir/data/x.seq"));
  const Config abs = parse("input = /abs/x.seq\n", "/some/dir");
  CHECK(abs.path("input") == fs::path("/abs/x.seq"));
}

TEST_CASE("space and weight specs") {
  const SpaceParams tl = parse_space("tl:s=0.5,p=2,q=inf", 2);
  CHECK(tl.kind == SpaceKind::triebel_lizorkin);
  CHECK(tl.s == 0.5);
  CHECK(std::isinf(tl.q));
  CHECK(tl.d == 2);
  CHECK(parse_space("besov:s=-1,p=1,q=3", 1).kind == SpaceKind::besov);
  CHECK_THROWS_AS(parse_space("tl:s=0,p=2", 1), ContractViolation);
  CHECK_THROWS_AS(parse_space("sobolev:s=0,p=2,q=2", 1), ContractViolation);
  CHECK_THROWS_AS(parse_space("tl:s=0,p=-2,q=2", 1), ContractViolation);

  const Config c = parse("space = tl:s=1,p=x,q=2\neta = powerlog:p=2,b=1\n");
  CHECK_THROWS_AS(c.space("space", 1), ConfigError);
  CHECK(c.weight("eta", "power:p=1").family() == WeightFamily::power_log);
}

TEST_CASE("every subcommand is registered with a schema") {
  for (const char* name : {"norm", "sigma", "approx-norm", "democracy", "jackson", "bernstein", "lorentz-besov",
                           "verify-all"}) {
    const Subcommand* cmd = find_subcommand(name);
    REQUIRE(cmd != nullptr);
    CHECK_FALSE(cmd->schema.empty());
  }
  CHECK(find_subcommand("frobnicate") == nullptr);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir("exit");
  const std::string good = (kData / "sample_norm.cfg").string();
  CHECK(run_tool("norm --config \"" + good + "\"").code == 0);
  CHECK(run_tool("norm --help").code == 0);
  CHECK(run_tool("").code == 2);
  CHECK(run_tool("frobnicate").code == 2);
  CHECK(run_tool("norm --config \"" + good + "\" --format xml").code == 2);
  CHECK(run_tool("norm --config \"" + good + "\" --seed -3").code == 2);
  CHECK(run_tool("norm --config /nonexistent/x.cfg").code == 2);
  CHECK(run_tool("norm").code == 2);  // input is required

  const fs::path unknown = write_file(dir / "unknown.cfg", "input = x.seq\nwibble = 1\n");
  CHECK(run_tool("norm --config \"" + unknown.string() + "\"").code == 2);
  const fs::path range = write_file(dir / "range.cfg", "input = " + (kData / "sample.seq").string() + "\np = -1\n");
  CHECK(run_tool("norm --config \"" + range.string() + "\"").code == 2);
  write_file(dir / "bad.seq", "0 0 1\n0 x 2\n");
  const fs::path bad_input = write_file(dir / "bad_input.cfg", "input = bad.seq\n");
  CHECK(run_tool("norm --config \"" + bad_input.string() + "\"").code == 2);

  // Negative control: an inadmissible alpha makes the democracy suite fail.
  const fs::path neg = write_file(dir / "neg.cfg", "alpha_offset = 0.1\ncriteria = 3\n");
  CHECK(run_tool("verify-all --config \"" + neg.string() + "\"").code == 1);
  const fs::path pos = write_file(dir / "pos.cfg", "criteria = 3\n");
  CHECK(run_tool("verify-all --config \"" + pos.string() + "\"").code == 0);
}

TEST_CASE("unit atom and empty input have closed-form rows") {
  const fs::path dir = scratch_dir("closed");
  write_file(dir / "atom.seq", "2 1 -3\n");
  write_file(dir / "empty.seq", "# nothing\n");
  const std::string keys = "s = 0.5\np = 1.5\nq = 3\nalpha = 0.75\nlorentz.mu = 1.5\n";
  write_file(dir / "atom.cfg", "input = atom.seq\n" + keys);
  write_file(dir / "empty.cfg", "input = empty.seq\n" + keys);
  for (const char* name : {"atom.cfg", "empty.cfg"}) {
    const Run r = run_tool("norm --config \"" + (dir / name).string() + "\"");
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      const auto f = split_csv_line(line);
      REQUIRE(f.size() == 10);
      CHECK_FALSE(f[5].empty());  // an expected value is present
      CHECK(f[7] == "true");
      ++rows;
    }
    CHECK(rows == 4);
  }
}

TEST_CASE("same seed gives byte-identical reports apart from timing") {
  const fs::path dir = scratch_dir("determinism");
  const fs::path cfg = write_file(dir / "dem.cfg",
                                  "f1 = tl:s=0,p=2,q=2\nf2 = tl:s=0.5,p=2,q=2\nfamilies = grid,random\n"
                                  "sizes = 4,8\nrandom_draws = 10\n");
  const Run a = run_tool("democracy --config \"" + cfg.string() + "\" --seed 77");
  const Run b = run_tool("democracy --config \"" + cfg.string() + "\" --seed 77");
  const Run c = run_tool("democracy --config \"" + cfg.string() + "\" --seed 78");
  REQUIRE(a.code == 0);
  CHECK(without_timing(a.out) == without_timing(b.out));
  CHECK(without_timing(a.out) != without_timing(c.out));

  // --out writes <dir>/<subcommand>.<format>; JSON carries the schema version.
  const fs::path out = dir / "out";
  REQUIRE(run_tool("democracy --config \"" + cfg.string() + "\" --seed 77 --format json --out \"" + out.string() +
                   "\"")
              .code == 0);
  std::ifstream json_in(out / "democracy.json");
  const auto doc = nlohmann::json::parse(json_in);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["rows"].size() + 1 == static_cast<std::size_t>(std::count(a.out.begin(), a.out.end(), '\n')));
}

TEST_CASE("norm on the sample fixture matches the recorded oracle values") {
  std::map<std::string, double> golden;
  std::ifstream gin(kData / "sample_norm.golden.csv");
  REQUIRE(gin);
  std::string line;
  std::getline(gin, line);
  while (std::getline(gin, line)) {
    const auto f = split_csv_line(line);
    golden[f[0]] = std::stod(f[1]);
  }
  REQUIRE(golden.size() == 4);

  const Run r = run_tool("norm --config \"" + (kData / "sample_norm.cfg").string() + "\"");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::getline(in, line);
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    const auto f = split_csv_line(line);
    REQUIRE(golden.count(f[1]) == 1);
    CHECK(testing::rel_err(std::stod(f[4]), golden[f[1]]) <= 1e-12);
    ++seen;
  }
  CHECK(seen == golden.size());
}
