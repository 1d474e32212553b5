#pragma once

#include <nlohmann/json.hpp>

#include "ajd/bounds.hpp"
#include "ajd/randmodel.hpp"

namespace ajd {

inline constexpr const char *kToolVersion = "0.1.0";

namespace report {

using Json = nlohmann::ordered_json;

/// BoundReport rendered with stable field names and ordering; measures appear
/// in the report's configured base, with a nats/bits pair alongside.
Json to_json(const bounds::BoundReport &rep, const JoinTree &tree);

/// Fixed-column CSV of MVD trials:
/// trial,d_A,d_B,d_C,N,delta,I_nats,rho,log1p_rho,epsilon,pass
std::string trials_csv(const std::vector<randmodel::TrialResult> &trials,
                       const randmodel::RandomModelSpec &spec, double delta);

/// Scatter CSV, one row per trial:
/// trial,d,N,rho_target,log1p_rho_target,rho,log1p_rho,I_nats
std::string scatter_csv(const std::vector<randmodel::ScatterRow> &rows);

/// Seed/spec echo written next to CSV outputs.
Json sidecar(const randmodel::RandomModelSpec &spec, double delta);

/// Coverage summary for a batch of MVD trials, with Wilson intervals and the
/// qualifying-condition flags.
Json montecarlo_summary(const std::vector<randmodel::TrialResult> &trials,
                        const randmodel::RandomModelSpec &spec, double delta);

}  // namespace report
}  // namespace ajd
