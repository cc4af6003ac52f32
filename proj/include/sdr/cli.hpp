#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sdr/pencil.hpp"

namespace sdr {

/// Parses "x1=0.3,x2=-0.9" into an assignment.
Assignment parse_point(const std::string& text);

/// Full command-line driver (args exclude the program name). Writes results
/// to `out` and diagnostics to `err`. Exit status: 0 success, 1 error or
/// failed verification, 2 when any membership query stays Unknown.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sdr
