#pragma once

#include <optional>

#include "ajd/info.hpp"
#include "ajd/jointree.hpp"

namespace ajd {
namespace bounds {

/// Domain sizes of a three-set MVD key ->> left | right, normalized so that
/// d_A >= d_B (the confidence formulas assume it without loss of generality).
struct MvdDims {
    std::uint64_t d_A = 1;
    std::uint64_t d_B = 1;
    std::uint64_t d_C = 1;

    static MvdDims normalized(std::uint64_t a, std::uint64_t b, std::uint64_t c);
    std::uint64_t d_bar() const { return std::max(d_A, d_C); }
};

/// C(d) = 2 log(d) / sqrt(d); the vanishing slack between log d and the
/// expected entropy under the random relation model.
double c_constant(std::uint64_t d);

/// High-probability deviation for the MVD mutual-information bound:
///   eps* = 60 sqrt(d_A * d_bar * log^3(6 N d_C / delta) / N),
/// valid (with probability 1-delta) once N >= 256 d_A d_bar log(384 d_bar/delta).
/// Values are natural-log based; `condition_ok` reports the guarantee regime.
struct EpsilonStar {
    double epsilon = 0.0;
    bool condition_ok = false;
    double n_threshold = 0.0;
};
EpsilonStar epsilon_star(const MvdDims &dims, std::uint64_t n, double delta);

/// Entropy confidence for the two-attribute model (d_C = 1, size eta):
/// log d_A >= H(A_S) >= log d_A - 20 sqrt(d_A log^3(eta/delta)/eta)
/// with probability 1-delta, once eta >= 128 d_A log(128 d_A/delta).
struct EntropyConfidence {
    double lower = 0.0;  // the bound on H(A_S), nats
    bool condition_ok = false;
    double eta_threshold = 0.0;
};
EntropyConfidence entropy_confidence(std::uint64_t d_A, std::uint64_t d_B, std::uint64_t eta,
                                     double delta);

/// Mutual-information confidence for d_C = 1:
/// I(A_S;B_S) >= log(1 + rho_bar) - 40 sqrt(d_A log^3(2 eta/delta)/eta),
/// where rho_bar = d_A d_B / eta - 1 also upper-bounds every realized rho.
struct MiConfidence {
    double lower = 0.0;
    double rho_bar = 0.0;
    bool condition_ok = false;
    double eta_threshold = 0.0;
};
MiConfidence mi_confidence(std::uint64_t d_A, std::uint64_t d_B, std::uint64_t eta, double delta);

/// Deterministic check J <= log(1 + rho). `rho_min` = e^J - 1 is the least
/// spurious ratio any relation with this J-measure can have.
struct LowerBoundCheck {
    double gap = 0.0;  // log(1+rho) - J
    double rho_min = 0.0;
    bool pass = false;
};
LowerBoundCheck lower_bound_check(double j_nats, double rho);

/// log(1+rho(R,S)) <= Σ_i log(1+rho(R,phi_i)) over the support MVDs.
struct ChainInequality {
    double lhs = 0.0;  // log(1+rho(R,S))
    double rhs = 0.0;  // Σ log(1+rho_i)
    std::vector<double> per_mvd_rho;
    std::vector<double> per_mvd_log1p_rho;
    bool pass = false;
};
ChainInequality chain_inequality(const Relation &r, const JoinTree &tree,
                                 const RootedOrder &order);

/// Everything cmd analyze reports: the J-measure, the spurious ratio, the
/// per-MVD decomposition, and both forms of the high-probability upper bound.
struct MvdRow {
    Mvd mvd;
    double I = 0.0;  // conditional mutual information, nats
    double rho = 0.0;
    double log1p_rho = 0.0;
    std::optional<double> epsilon;  // absent without declared domains
    std::optional<bool> condition_ok;
    std::optional<MvdDims> dims;
};

struct BoundReport {
    double j_nats = 0.0;
    double rho = 0.0;
    double log1p_rho = 0.0;
    double rho_min = 0.0;
    double delta = 0.1;
    LogBase log_base = LogBase::E;
    int root_id = 0;

    std::uint64_t n_total = 0;     // rows with multiplicity
    std::uint64_t n_distinct = 0;  // distinct support size
    u128 join_count = 0;
    bool duplicates_present = false;

    double sandwich_lower = 0.0;  // max_i I_i
    double sandwich_upper = 0.0;  // Σ_i I_i

    std::vector<MvdRow> mvds;
    ChainInequality chain;
    LowerBoundCheck lower;

    // 1-delta upper bounds on log(1+rho); absent without declared domains
    std::optional<double> upper_bound_sumI;  // Σ (I_i + eps_i)
    std::optional<double> upper_bound_mJ;    // (m-1) J + Σ eps_i
    bool all_conditions_ok = false;

    std::vector<std::string> warnings;
    std::vector<std::string> notes;
};

struct AnalyzeOptions {
    double delta = 0.1;
    LogBase base = LogBase::E;
    std::optional<int> root;
};

/// Runs the full deterministic + high-probability analysis of one relation
/// against one join tree.
BoundReport analyze(const Relation &r, const JoinTree &tree, const AnalyzeOptions &options = {});

}  // namespace bounds
}  // namespace ajd
