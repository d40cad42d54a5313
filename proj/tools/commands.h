#ifndef STATIONMATCH_TOOLS_COMMANDS_H_
#define STATIONMATCH_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace stationmatch::cli {

// sysexits-style exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitSoftware = 70;
inline constexpr int kExitConfig = 78;

// Runs the stationmatch command line on args (args[0] is the program name).
// Normal output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace stationmatch::cli

#endif  // STATIONMATCH_TOOLS_COMMANDS_H_
