#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hqflow::cli {

// Exit codes: 0 success, 1 run failure or deadlock, 2 usage or validation
// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hqflow::cli
