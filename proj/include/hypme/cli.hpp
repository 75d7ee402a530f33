#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypme {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one `hypme` subcommand. `args` excludes the program name.
///
/// Exit codes: 0 success, 1 usage / parse / precondition errors, 2 when a
/// checked mathematical statement fails (an obstruction violation on a host
/// with a certified constant, a cocycle identity violation, a failed measure bound).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypme
