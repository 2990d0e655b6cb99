#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nig {

/// Runs the `nig` command line with `args` (without the program name).
/// Reports go to `out`, diagnostics to `err`. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nig
