#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtlab::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success (warnings allowed), 2 usage or parse error,
// 3 precondition error, 4 budget exceeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtlab::cli
