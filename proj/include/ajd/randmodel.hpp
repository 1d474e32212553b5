#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ajd/bounds.hpp"
#include "ajd/relation.hpp"

namespace ajd {
namespace randmodel {

/// Counter-based SplitMix64 stream. Each (seed, stream) pair is an
/// independent, reproducible sequence; trials own their stream, so parallel
/// execution shares no RNG state.
class SplitMix64 {
  public:
    SplitMix64(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();
    /// Unbiased uniform draw in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound);
    u128 below128(u128 bound);

  private:
    std::uint64_t state_;
};

/// Uniform sampling of N distinct tuples from the product of declared domains.
struct RandomModelSpec {
    std::vector<std::uint64_t> dims;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint32_t trials = 1;

    u128 product() const;  // overflow-checked
    void check() const;    // 0 < n <= product, dims nonempty and positive
};

/// The N sampled cell indices (row-major over the domains) for one trial.
/// Exactly uniform over all size-N subsets; deterministic in (seed, trial).
std::vector<u128> sample_cells(const RandomModelSpec &spec, std::uint32_t trial);

/// The sampled cells decoded into a Relation over attributes X0..X{n-1} with
/// the declared domain sizes.
Relation sample_relation(const RandomModelSpec &spec, std::uint32_t trial);

/// Per-trial measurements for a 2- or 3-attribute MVD spec (A, B and an
/// optional condition attribute C). Everything is recomputable from
/// (spec, trial) alone.
struct TrialResult {
    std::uint32_t trial = 0;
    double h_a = 0.0, h_b = 0.0, h_c = 0.0;  // nats
    double i_nats = 0.0;                     // I(A;B|C)
    double rho = 0.0;                        // via Σ_c |π_A(R_c)|·|π_B(R_c)|
    double log1p_rho = 0.0;
    double epsilon = 0.0;  // eps*(phi, N, delta)
    bool epsilon_condition_ok = false;
    bool mvd_bound_pass = false;  // log(1+rho) <= I + eps*

    // d_C = 1 extras (eta = N)
    std::optional<double> entropy_lower;  // confidence lower bound on H(A)
    std::optional<bool> entropy_pass;     // lower <= H(A) <= log d_A
    std::optional<double> mi_lower;       // log(1+rho_bar) - deviation
    std::optional<double> rho_bar;
    std::optional<bool> mi_pass;
};

/// Runs `spec.trials` independent trials in parallel (capped by AJD_THREADS)
/// and returns them ordered by trial index.
std::vector<TrialResult> run_mvd_trials(const RandomModelSpec &spec, double delta);

/// One scatter row: a sampled d x d relation sized for the target spurious
/// ratio via N = round(d^2 / (1 + rho_target)); the realized rho is measured.
struct ScatterRow {
    std::uint32_t trial = 0;
    std::uint64_t d = 0;
    std::uint64_t n = 0;
    double rho_target = 0.0;
    double log1p_rho_target = 0.0;
    double rho = 0.0;
    double log1p_rho = 0.0;
    double i_nats = 0.0;
};

std::vector<ScatterRow> scatter_experiment(std::uint64_t d, std::vector<double> rho_targets,
                                           std::uint32_t trials, std::uint64_t seed);

/// 95% Wilson score interval for k successes out of n.
struct WilsonInterval {
    double rate = 0.0;
    double low = 0.0;
    double high = 0.0;
};
WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n);

/// Worker count: min(hardware, AJD_THREADS when set).
unsigned thread_budget();

}  // namespace randmodel
}  // namespace ajd
