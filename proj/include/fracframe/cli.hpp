#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracframe::cli {

/// Runs one subcommand. `args` excludes the program name. Artifacts go to --out, or to `out`
/// when no path is given. Returns 0 on success, 1 on a computation error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracframe::cli
