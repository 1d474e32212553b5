#pragma once

#include <string>
#include <vector>

namespace ajd {
namespace cli {

/// Runs one CLI invocation. Exit codes: 0 success, 1 verification failure,
/// 2 input error.
int run(const std::vector<std::string> &args);

}  // namespace cli
}  // namespace ajd
