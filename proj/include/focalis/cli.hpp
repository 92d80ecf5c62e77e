#pragma once

#include <ostream>
#include <string_view>

namespace focalis::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes: 0 success, 1 a check failed, 2 usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace focalis::cli
