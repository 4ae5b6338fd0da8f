#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnrthresh::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs one CLI invocation. `args` excludes the program name. Table output
/// goes to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// printf("%.9g"), the precision used for every CSV value.
std::string format_real(double v);

}  // namespace pnrthresh::cli
