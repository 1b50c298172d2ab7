#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netevo {

// Exit statuses of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitRuntime = 3 };

/// Runs one `netevo` command. `args` excludes the program name. Normal output
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace netevo
