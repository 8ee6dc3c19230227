#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace strata {

/// Runs one `strata-bench` subcommand. args excludes the program name.
/// Returns 0 on success, 1 on a module error and 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace strata
