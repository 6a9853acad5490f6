#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace radgrowth::cli {

// Exit codes of run().
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand; `args` excludes the program name. The JSON report is
// written to `out`, diagnostics to `err`. Reports and CSV tables are also
// written under the output directory when --out or RADGROWTH_OUT is set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radgrowth::cli
