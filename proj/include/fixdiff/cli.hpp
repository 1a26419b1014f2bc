#ifndef FIXDIFF_CLI_HPP
#define FIXDIFF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fixdiff::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // usage, parse and IO errors
inline constexpr int kExitDivergence = 2;  // iteration cap exceeded
inline constexpr int kExitLawFailure = 3;  // a law report failed

/// Entry point used by both the binary and the tests: parses `solve`,
/// `grammar` and `laws` subcommands, writes results to `out` and
/// diagnostics to `err`, and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fixdiff::cli

#endif
