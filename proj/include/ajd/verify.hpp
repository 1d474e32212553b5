#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ajd {
namespace verify {

struct Options {
    std::uint64_t seed = 42;
    bool quick = false;
    /// Swaps a deliberately wrong join oracle into the cross-check property;
    /// the suite must then fail, proving the checks can fail.
    bool inject_fault = false;
};

struct PropertyResult {
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::string detail;  // first failure description
    bool passed() const { return failures == 0; }
};

/// Runs every module's invariant suite. Deterministic in the seed.
std::vector<PropertyResult> run_all(const Options &options);

}  // namespace verify
}  // namespace ajd
