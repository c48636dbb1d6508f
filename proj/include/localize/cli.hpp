#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace localize::cli {

enum ExitCode : int { Ok = 0, Failure = 1, BadInput = 2 };

/// Runs one command line (args excludes the program name). Results go to
/// out (or to --out), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses angles such as "0.3", "pi", "-pi/4", "3pi/8", "3*pi/8".
double parse_angle(const std::string& text);

}  // namespace localize::cli
