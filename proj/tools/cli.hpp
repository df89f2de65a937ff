#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hir::cli {

enum ExitCode : int { success = 0, usage_failure = 1, data_failure = 2, io_failure = 3 };

/// Runs one `hilx` invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hir::cli
