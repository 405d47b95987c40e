#pragma once

#include <string>

namespace d2dcoex::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;         // runtime failure (I/O, empty report, ...)
inline constexpr int kUsage = 2;           // unknown flag or bad argument
inline constexpr int kUnreadableInput = 3; // config/table missing or malformed
inline constexpr int kInvariant = 4;       // config or table violates an invariant

/// Environment variable consulted when --out is absent.
inline constexpr const char* kOutEnv = "D2DCOEX_OUT";

/// Runs one command line. Errors are reported on stderr as a single line
///   error code=<exit> kind=<kind> message=<text>
int parse_and_dispatch(int argc, const char* const* argv);

/// Full help text: every subcommand and flag.
std::string help_text();

}  // namespace d2dcoex::cli
