#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ctt::cli {

/// Exit codes: 0 ok/valid/proved, 1 checked and negative, 2 usage or parse
/// error, 3 resource cap (fuel, size, rank).
enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kCap = 3 };

/// Runs one `ctt` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctt::cli
