#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hicarbon {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitInfeasible = 4,
};

/// Environment variable naming the default technology database.
inline constexpr const char* kDatabaseEnv = "HICARBON_DB";

/// Entry point of the `hicarbon` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hicarbon
