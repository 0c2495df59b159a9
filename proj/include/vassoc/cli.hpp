// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vassoc {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParse = 2,
    kExitEmptyMask = 3,
    kExitCountMismatch = 4,
    kExitMissingDescriptor = 5,
    kExitVideoMismatch = 6,
};

/// Runs the tool with `args` (without the program name). Diagnostics go to
/// `err`, results that are not written to files go to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vassoc
