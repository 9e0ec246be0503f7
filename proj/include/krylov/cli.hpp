#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krylov {

// Entry point of the krylov command line; args excludes the program name.
// Returns the process exit code: 0 success, 1 usage, 2 numerical or
// invariant failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace krylov
