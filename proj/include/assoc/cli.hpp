#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace assoc {

/// Runs the command line `args` (without the program name). Results go to
/// `out` or to the --out file, diagnostics to `err`.
///
/// Exit codes: 0 success, 1 domain error (unknown word, violated
/// precondition), 2 usage, I/O or format error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace assoc
