#pragma once

#include <iosfwd>

namespace apfree {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitMalformedInput = 2,
  kExitRefinementExhausted = 3,
};

/// Runs one command. Errors are reported as a JSON object on `err`.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace apfree
