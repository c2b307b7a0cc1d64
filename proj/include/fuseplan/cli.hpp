#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fuseplan::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2 };

// Entry point of the `fuseplan` tool. `args` excludes the program name.
// Returns the process exit code: 0 success, 1 validation/domain error,
// 2 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

// ANSI output is enabled only for terminals and when FUSEPLAN_NO_COLOR is unset.
bool color_enabled_for_stdout();

}  // namespace fuseplan::cli
