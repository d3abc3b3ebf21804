#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optstop::cli {

/// Entry point of the `optstop` tool. `args` excludes the program name.
/// Returns the process exit code: 0 success, 2 usage error, 3 numerical
/// failure, 4 invariant violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optstop::cli
