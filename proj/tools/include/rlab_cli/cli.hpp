#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rlab::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kPreconditionError = 3;

// Runs one command. args excludes the program name. Errors are reported on
// `err` as a single line: error: code=<code> message="<text>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlab::cli
