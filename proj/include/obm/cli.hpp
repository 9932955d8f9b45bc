#pragma once

#include "obm/io.hpp"

#include <iosfwd>

namespace obm::cli {

enum ExitCode { Ok = 0, ValidationFailure = 2, SolverFailureExit = 3, InequalityViolation = 4 };

// Everything a run needs. Inputs hold the parsed descriptors (not file names), so a
// saved scenario replays without the original files.
struct Scenario {
  std::string command;
  io::Json inputs = io::Json::object();
  int grid = 0;  // 0: library default
  std::uint64_t seed = 42;
  std::string out;  // empty: stdout
  std::string format = "json";

  bool operator==(const Scenario& o) const {
    return command == o.command && inputs == o.inputs && grid == o.grid && seed == o.seed && out == o.out &&
           format == o.format;
  }
};

io::Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const io::Json& j);
const std::vector<std::string>& commands();

// Runs one scenario; errors become structured JSON on err and an exit code.
int run(const Scenario& s, std::ostream& out, std::ostream& err);

// Full command line: `obm <command> [flags]` or `obm run <scenario.json>`.
int main(int argc, char** argv);

}  // namespace obm::cli
