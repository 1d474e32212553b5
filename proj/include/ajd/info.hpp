#pragma once

#include <span>

#include "ajd/distribution.hpp"

namespace ajd {

/// Display base for reported measures. All internal computation is in nats;
/// a single base is used consistently within one run/report.
enum class LogBase { E, Two };

inline double nats_to_bits(double nats) { return nats / M_LN2; }
inline double in_base(double nats, LogBase base) {
    return base == LogBase::E ? nats : nats_to_bits(nats);
}
const char *log_base_name(LogBase base);
LogBase parse_log_base(const std::string &name);

namespace info {

/// Shannon entropy of the marginal on `attrs`, in nats. H(∅) = 0.
/// For empirical inputs this is log N - (Σ K log K)/N over integer counts,
/// which is exact for duplicate-free relations.
double entropy(const EmpiricalDistribution &p, AttrMask attrs);
double entropy(const Distribution &p, AttrMask attrs);

/// I(A;B|C) = H(BC) + H(AC) - H(ABC) - H(C). Overlapping argument sets are
/// permitted; the value only depends on the unions, so stripping C from the
/// sides changes nothing. Clamped to 0 within rounding tolerance.
double cond_mutual_info(const EmpiricalDistribution &p, AttrMask a, AttrMask b, AttrMask c);
double cond_mutual_info(const Distribution &p, AttrMask a, AttrMask b, AttrMask c);

/// D(P||Q) in nats; +infinity when P puts mass outside Q's support.
/// Schemas must agree (names and domains).
double kl_divergence(const Distribution &p, const Distribution &q);

/// Ent(X) = E[X log X] - E[X] log E[X] for a weighted sample of a non-negative
/// variable, with 0 log 0 = 0. Weights must form a probability vector.
double functional_entropy(std::span<const double> values, std::span<const double> weights);

}  // namespace info

}  // namespace ajd
