#include <doctest.h>

#include "ds2/cli.hpp"
#include "ds2/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ds2;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "ds2_cli");
  std::vector<char *> argv;
  for (auto &a : args)
    argv.push_back(a.data());
  return run_cli(int(argv.size()), argv.data());
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const std::string &name, const std::string &text) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

} // namespace

TEST_CASE("config file parsing") {
  const fs::path p = write_config("ds2_cfg_ok.txt", "# comment\nR = 2\nresolution = half  # trailing\n"
                                                    "eps_levels = 0.1, 0.05,0.025\nseed = 7\nkappa = paper\n");
  const RunConfig c = RunConfig::load(p.string());
  CHECK(c.R == 2.0);
  CHECK(c.resolution == "half");
  CHECK(c.eps_levels.size() == 3);
  CHECK(c.seed == 7);
  CHECK(c.kappa_convention() == KappaConvention::paper);
  CHECK(c.grid().R == 2.0);
  CHECK(c.to_text().find("R = 2\n") != std::string::npos);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(RunConfig::load(write_config("ds2_cfg_bad1.txt", "radius = 2\n").string()), DomainError);
  CHECK_THROWS_AS(RunConfig::load(write_config("ds2_cfg_bad2.txt", "R = two\n").string()), DomainError);
  CHECK_THROWS_AS(RunConfig::load(write_config("ds2_cfg_bad3.txt", "R 2\n").string()), DomainError);
  CHECK_THROWS_AS(RunConfig::load(write_config("ds2_cfg_bad4.txt", "R = -1\n").string()), DomainError);
  CHECK_THROWS_AS(RunConfig::load(write_config("ds2_cfg_bad5.txt", "convention = other\n").string()), DomainError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/ds2.cfg"), DomainError);
}

TEST_CASE("exit codes") {
  const std::string out = (fs::temp_directory_path() / "ds2_cli_codes").string();
  CHECK(run({"--bogus", "kernel"}) == 2);
  CHECK(run({}) == 2);
  CHECK(run({"--resolution", "fine", "kernel"}) == 2);
  const fs::path bad = write_config("ds2_cfg_cut.txt", "lambda_min = -1\n");
  CHECK(run({"--config", bad.string(), "--out", out, "kernel"}) == 2);
  CHECK(run({"--out", out, "kernel"}) == 0);
  CHECK(run({"--out", out, "limit"}) == 0);
}

TEST_CASE("kernel report is reproducible and echoes its configuration") {
  const fs::path a = fs::temp_directory_path() / "ds2_cli_a", b = fs::temp_directory_path() / "ds2_cli_b";
  REQUIRE(run({"--out", a.string(), "--seed", "11", "kernel"}) == 0);
  REQUIRE(run({"--out", b.string(), "--seed", "11", "kernel"}) == 0);
  const std::string ca = slurp(a / "kernel.csv"), cb = slurp(b / "kernel.csv");
  CHECK(!ca.empty());
  // identical apart from the echoed output directory
  const auto strip = [](std::string s) {
    std::string r, line;
    std::istringstream in(s);
    while (std::getline(in, line))
      if (line.rfind("# out =", 0) != 0)
        r += line + "\n";
    return r;
  };
  CHECK(strip(ca) == strip(cb));
  CHECK(ca.find("# seed = 11\n") != std::string::npos);
  CHECK(ca.find("lambda,re,im\n") != std::string::npos);
  const std::string ja = slurp(a / "kernel.json");
  CHECK(ja.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("checks") {
  CHECK(at_most("x", "t", 1.0, 1.0).pass());
  CHECK_FALSE(below("x", "t", 0.0, 0.0).pass());
  Check c = at_most("x", "t", 2.0, 1.0);
  c.relation = ">=";
  CHECK(c.pass());
  Check n = at_most("x", "t", std::nan(""), 1.0);
  CHECK_FALSE(n.pass());
}
