#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sphcover::cli {

/// Runs one `sphcover` invocation; args excludes the program name.
/// Exit codes: 0 covered / yes / success, 1 not covered / no, 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sphcover::cli
