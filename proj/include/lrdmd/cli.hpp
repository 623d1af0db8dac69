#ifndef LRDMD_CLI_HPP
#define LRDMD_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lrdmd::cli {

// Process exit codes.
enum ExitCode : int {
  ok = 0,
  usage = 2,
  simulation_failure = 3,
  pairing_failure = 4,
  verification_failure = 5,
};

// Runs the command line tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace lrdmd::cli

#endif
