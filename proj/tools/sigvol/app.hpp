#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigvol::cli {

enum class Status { ok = 0, invalid = 1, degenerate = 2 };

/// Runs one CLI invocation. `args` excludes the program name. The last line
/// written to `out` is always `status=<ok|invalid|degenerate>`.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sigvol::cli
