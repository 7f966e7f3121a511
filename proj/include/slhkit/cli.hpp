#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slh::cli {

// Runs one command-line invocation (argv without the program name) against
// the given streams.  Returns the process exit code: 0 on success, 1 on a
// user error (bad input file, invalid circuit, bad arguments), 2 on an
// internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slh::cli
