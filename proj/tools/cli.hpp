#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddix::cli {

// Exit codes: 0 success, 1 usage error, 2 data or validation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ddix::cli
