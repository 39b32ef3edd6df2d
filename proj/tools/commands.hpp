#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "entswitch/error.hpp"

namespace entswitch::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitRejected = 2,
  kExitTolerance = 3,
};

int exit_code_for(ErrorKind kind);

// Runs one command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entswitch::cli
