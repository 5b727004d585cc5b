#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chiraltop/error.hpp"

namespace chiraltop::cli {

// Exit codes: 0 success, 2 usage, 3 range, 4 params, 5 validation, 6 unresolved, 7 boundary.
enum ExitCode { ok = 0, internal = 1, usage = 2, range = 3, params = 4, validation = 5, unresolved = 6, boundary = 7 };

int exit_code_for(ErrorKind kind);

// Runs one command line (args excludes the program name); never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chiraltop::cli
