#include "ajd/bounds.hpp"

#include <cmath>
#include <limits>

namespace ajd {
namespace bounds {

namespace {

constexpr double kVerdictTol = 1e-9;

double cube(double x) { return x * x * x; }

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw Error("delta must lie in (0,1), got " + fmt_double(delta));
}

}  // namespace

MvdDims MvdDims::normalized(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    if (a == 0 || b == 0 || c == 0) throw Error("MVD domain sizes must be positive");
    if (a < b) std::swap(a, b);
    return MvdDims{a, b, c};
}

double c_constant(std::uint64_t d) {
    if (d == 0) throw Error("C(d) needs d >= 1");
    return 2.0 * std::log(static_cast<double>(d)) / std::sqrt(static_cast<double>(d));
}

EpsilonStar epsilon_star(const MvdDims &dims, std::uint64_t n, double delta) {
    check_delta(delta);
    if (n < 1) throw Error("epsilon* needs N >= 1");
    const double dn = static_cast<double>(n);
    const double da = static_cast<double>(dims.d_A);
    const double dbar = static_cast<double>(dims.d_bar());
    const double dc = static_cast<double>(dims.d_C);
    EpsilonStar out;
    out.epsilon = 60.0 * std::sqrt(da * dbar * cube(std::log(6.0 * dn * dc / delta)) / dn);
    out.n_threshold = 256.0 * da * dbar * std::log(384.0 * dbar / delta);
    out.condition_ok = dn >= out.n_threshold;
    return out;
}

EntropyConfidence entropy_confidence(std::uint64_t d_A, std::uint64_t d_B, std::uint64_t eta,
                                     double delta) {
    check_delta(delta);
    auto dims = MvdDims::normalized(d_A, d_B, 1);
    u128 cells;
    if (mul_overflows(u128{dims.d_A}, u128{dims.d_B}, cells) || eta < 1 || u128{eta} > cells)
        throw Error("eta must lie in [1, d_A * d_B]");
    const double da = static_cast<double>(dims.d_A);
    const double e = static_cast<double>(eta);
    EntropyConfidence out;
    out.lower = std::log(da) - 20.0 * std::sqrt(da * cube(std::log(e / delta)) / e);
    out.eta_threshold = 128.0 * da * std::log(128.0 * da / delta);
    out.condition_ok = e >= out.eta_threshold;
    return out;
}

MiConfidence mi_confidence(std::uint64_t d_A, std::uint64_t d_B, std::uint64_t eta, double delta) {
    check_delta(delta);
    auto dims = MvdDims::normalized(d_A, d_B, 1);
    u128 cells;
    if (mul_overflows(u128{dims.d_A}, u128{dims.d_B}, cells) || eta < 1 || u128{eta} > cells)
        throw Error("eta must lie in [1, d_A * d_B]");
    const double da = static_cast<double>(dims.d_A);
    const double db = static_cast<double>(dims.d_B);
    const double e = static_cast<double>(eta);
    MiConfidence out;
    out.rho_bar = da * db / e - 1.0;
    out.lower = std::log1p(out.rho_bar) - 40.0 * std::sqrt(da * cube(std::log(2.0 * e / delta)) / e);
    out.eta_threshold = 128.0 * da * std::log(128.0 * da / delta);
    out.condition_ok = e >= out.eta_threshold;
    return out;
}

LowerBoundCheck lower_bound_check(double j_nats, double rho) {
    if (rho < 0.0) throw Error("spurious ratio cannot be negative");
    if (j_nats < 0.0) throw Error("J-measure cannot be negative");
    LowerBoundCheck out;
    out.gap = std::log1p(rho) - j_nats;
    out.rho_min = std::expm1(j_nats);
    out.pass = out.gap >= -kVerdictTol;
    return out;
}

ChainInequality chain_inequality(const Relation &r, const JoinTree &tree,
                                 const RootedOrder &order) {
    ChainInequality out;
    out.lhs = std::log1p(spurious_ratio(r, tree));
    std::vector<double> terms;
    for (const auto &mvd : mvd_support(tree, order)) {
        double rho = mvd_spurious_ratio(r, mvd);
        out.per_mvd_rho.push_back(rho);
        out.per_mvd_log1p_rho.push_back(std::log1p(rho));
        terms.push_back(out.per_mvd_log1p_rho.back());
    }
    out.rhs = stable_sum(std::move(terms));
    out.pass = out.lhs <= out.rhs + kVerdictTol;
    return out;
}

namespace {

// Per-MVD dims for the high-probability bound: products of declared domain
// sizes over key, left\key and right\key. Errors when a domain is undeclared
// (observed supports are not what the guarantee is about).
std::optional<MvdDims> mvd_dims(const AttributeSchema &schema, const Mvd &mvd,
                                std::string *why_not) {
    auto product_of = [&](AttrMask m) -> std::optional<std::uint64_t> {
        u128 prod = 1;
        for (std::size_t i : mask_indices(m)) {
            const auto &a = schema.at(i);
            if (!a.declared) {
                if (why_not)
                    *why_not = "attribute '" + a.name + "' has no declared domain size";
                return std::nullopt;
            }
            if (mul_overflows(prod, u128{a.domain_size}, prod) ||
                prod > u128{std::numeric_limits<std::uint64_t>::max()})
                throw Error("declared domain product overflows");
        }
        return static_cast<std::uint64_t>(prod);
    };
    auto da = product_of(mvd.left & ~mvd.key);
    auto db = product_of(mvd.right & ~mvd.key);
    auto dc = product_of(mvd.key);
    if (!da || !db || !dc) return std::nullopt;
    return MvdDims::normalized(*da, *db, *dc);
}

}  // namespace

BoundReport analyze(const Relation &r, const JoinTree &tree, const AnalyzeOptions &options) {
    check_delta(options.delta);
    auto validation = validate(tree);
    if (!validation.ok) throw Error("invalid join tree: " + validation.errors.front());

    BoundReport rep;
    rep.warnings = validation.warnings;
    rep.delta = options.delta;
    rep.log_base = options.base;

    auto order = dfs_order(tree, options.root);
    rep.root_id = order.root_id;

    auto p = empirical(r);
    rep.n_total = r.size();
    rep.n_distinct = r.distinct_count();
    rep.duplicates_present = rep.n_total != rep.n_distinct;

    rep.j_nats = j_measure(tree, p);
    rep.join_count = join_size(r, tree);
    rep.rho = spurious_ratio(r, tree);
    rep.log1p_rho = std::log1p(rep.rho);

    auto jb = j_bounds(tree, p, order);
    rep.sandwich_lower = jb.lower;
    rep.sandwich_upper = jb.upper;

    rep.lower = lower_bound_check(rep.j_nats, rep.rho);
    rep.rho_min = rep.lower.rho_min;
    rep.chain = chain_inequality(r, tree, order);

    auto support = mvd_support(tree, order);
    const std::size_t m = order.size();
    bool have_all_dims = m >= 2;
    bool all_cond = true;
    std::string why_not;
    std::vector<double> eps_terms, sumI_terms;
    for (std::size_t i = 0; i < support.size(); ++i) {
        MvdRow row;
        row.mvd = support[i];
        row.I = jb.terms[i];
        row.rho = rep.chain.per_mvd_rho[i];
        row.log1p_rho = rep.chain.per_mvd_log1p_rho[i];
        if (auto dims = mvd_dims(tree.schema(), support[i], &why_not)) {
            auto eps =
                epsilon_star(*dims, rep.n_distinct, options.delta / static_cast<double>(m - 1));
            row.dims = *dims;
            row.epsilon = eps.epsilon;
            row.condition_ok = eps.condition_ok;
            all_cond = all_cond && eps.condition_ok;
            eps_terms.push_back(eps.epsilon);
            sumI_terms.push_back(row.I + eps.epsilon);
        } else {
            have_all_dims = false;
        }
        rep.mvds.push_back(std::move(row));
    }

    if (m < 2) {
        rep.upper_bound_sumI = 0.0;
        rep.upper_bound_mJ = 0.0;
        rep.all_conditions_ok = true;
        rep.notes.push_back("single-bag schema: the join is the distinct relation itself");
    } else if (have_all_dims) {
        rep.upper_bound_sumI = stable_sum(sumI_terms);
        rep.upper_bound_mJ =
            static_cast<double>(m - 1) * rep.j_nats + stable_sum(eps_terms);
        rep.all_conditions_ok = all_cond;
        if (!all_cond)
            rep.notes.push_back(
                "outside guarantee regime: some per-MVD sample-size conditions fail; the "
                "high-probability bounds are evaluated but not guaranteed");
        rep.notes.push_back("high-probability bounds hold with probability 1-delta under the "
                            "uniform random relation model, not deterministically");
    } else {
        rep.notes.push_back("high-probability upper bounds skipped: " + why_not);
    }
    if (rep.duplicates_present)
        rep.notes.push_back(
            "input is a multiset: rho is measured on the distinct-tuple support while the "
            "J-measure uses multiplicities, so deterministic verdicts may fail");
    rep.notes.push_back("deviation terms are evaluated in natural log");
    return rep;
}

}  // namespace bounds
}  // namespace ajd
