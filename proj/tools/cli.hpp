#pragma once

// Subcommand implementations behind the pet-erg executable. Kept in a library
// so tests can drive them in-process.

#include <ostream>
#include <string>
#include <vector>

namespace pet_erg::cli {

enum ExitCode : int {
  kOk = 0,
  kConstraintViolation = 1,  // simulate: a monitor flagged a violation
  kBadConfig = 2,            // unreadable or invalid config, bad flags
  kRuntimeAbort = 3,         // simulation aborted (reference escaped)
  kOracleExceeded = 4,       // gamma-d: sampled torque above tau_max
  kSweepViolation = 5,       // sweep: at least one run failed
};

std::string version_string();

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int main(int argc, char** argv);

}  // namespace pet_erg::cli
