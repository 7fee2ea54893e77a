#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eaqc {

/// Runs the command line `eaqc <args...>` (program name excluded) and returns
/// the process exit code: 0 success, 1 domain error, 2 I/O or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eaqc
