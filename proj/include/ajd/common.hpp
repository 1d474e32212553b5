#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ajd {

/// Raised for malformed inputs: bad files, violated preconditions, unknown names.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal numeric consistency check fails (e.g. an entropy
/// that is negative far beyond rounding noise). Indicates a bug, not bad input.
class InternalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Value = std::uint32_t;       // dense attribute-value code
using Tuple = std::vector<Value>;  // one code per attribute of some schema/subset
using AttrMask = std::uint64_t;    // bit i = attribute at schema position i

constexpr std::size_t kMaxAttributes = 64;

using u128 = unsigned __int128;

inline bool add_overflows(u128 a, u128 b, u128 &out) { return __builtin_add_overflow(a, b, &out); }
inline bool mul_overflows(u128 a, u128 b, u128 &out) { return __builtin_mul_overflow(a, b, &out); }

std::string to_string_u128(u128 v);

/// Shortest round-trip decimal rendering, locale-independent. Used everywhere a
/// double lands in a report or CSV so that reruns are byte-identical.
std::string fmt_double(double v);

inline std::vector<std::size_t> mask_indices(AttrMask m) {
    std::vector<std::size_t> idx;
    while (m) {
        idx.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
    }
    return idx;
}

inline std::size_t mask_size(AttrMask m) { return static_cast<std::size_t>(std::popcount(m)); }

struct TupleHash {
    std::size_t operator()(const Tuple &t) const noexcept {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (Value v : t) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// Sorts terms by magnitude and applies Neumaier-compensated summation.
/// Keeps accumulation error near one ulp of the true sum even on 1e6-term
/// entropy/KL series, which the 1e-12 report tolerances rely on.
double stable_sum(std::vector<double> terms);

}  // namespace ajd
