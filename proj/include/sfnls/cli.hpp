#pragma once

#include <iosfwd>

namespace sfnls {

/// Exit codes of the command-line interface.
enum ExitCode : int { kExitOk = 0, kExitVerdictFail = 1, kExitUsage = 2, kExitBlowUp = 3 };

/// Entry point for `sfnls <subcommand> [flags]`; subcommands are simulate,
/// converge-time, converge-space, verify and potential-gen.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sfnls
