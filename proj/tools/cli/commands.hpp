#ifndef LEVYCOUPLE_CLI_COMMANDS_HPP_
#define LEVYCOUPLE_CLI_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace levycouple::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitInvariantViolation = 2,
};

const std::vector<std::string>& subcommand_names();

/// Validates the config, runs one subcommand and writes its CSV to `out`.
/// Errors are reported on `err` and turned into the exit code; nothing
/// escapes as an exception.
int run(const ExperimentConfig& config, const std::string& subcommand,
        std::ostream& out, std::ostream& err);

}  // namespace levycouple::cli

#endif  // LEVYCOUPLE_CLI_COMMANDS_HPP_
