#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ds2/config.hpp"

namespace ds2 {

// Bad command line or out-of-range request; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string name;
  std::string tag;
  double value = 0.0;
  double bound = 0.0;
  std::string relation = "<="; // "<=", "<" or ">="
  bool pass() const;
};

Check at_most(std::string name, std::string tag, double value, double bound);
Check below(std::string name, std::string tag, double value, double bound);

struct CsvFile {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string command;
  std::vector<Check> checks;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  std::vector<CsvFile> tables;

  bool passed() const;
  nlohmann::ordered_json to_json(const RunConfig &cfg) const;
};

Report cmd_kernel(const RunConfig &cfg);
Report cmd_limit(const RunConfig &cfg);
Report cmd_krein(const RunConfig &cfg);
Report cmd_fock(const RunConfig &cfg);
Report cmd_charge(const RunConfig &cfg);
Report cmd_invariance(const RunConfig &cfg);

// Writes <out>/<command>.json and every table as <out>/<name>.csv.
void write_report(const Report &r, const RunConfig &cfg);

// Exit codes: 0 pass, 1 failed check, 2 usage error.
int run_cli(int argc, char **argv);

} // namespace ds2
