#include "ajd/verify.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "ajd/generators.hpp"
#include "ajd/oracle.hpp"
#include "ajd/report.hpp"

namespace ajd {
namespace verify {

namespace {

using gen::SplitMix64;

struct Harness {
    Options options;
    std::vector<PropertyResult> results;

    std::uint64_t scale(std::uint64_t full, std::uint64_t quick) const {
        return options.quick ? quick : full;
    }

    void property(const std::string &name, std::uint64_t trials,
                  const std::function<std::string(SplitMix64 &, std::uint64_t)> &body) {
        PropertyResult res;
        res.name = name;
        res.trials = trials;
        SplitMix64 rng(options.seed, std::hash<std::string>{}(name));
        for (std::uint64_t t = 0; t < trials; ++t) {
            std::string detail;
            try {
                detail = body(rng, t);
            } catch (const std::exception &e) {
                detail = std::string("exception: ") + e.what();
            }
            if (!detail.empty()) {
                ++res.failures;
                if (res.detail.empty())
                    res.detail = "trial " + std::to_string(t) + ": " + detail;
            }
        }
        results.push_back(std::move(res));
    }
};

SchemaPtr random_small_schema(SplitMix64 &rng, std::size_t max_arity = 4,
                              std::uint64_t max_dim = 4) {
    std::size_t arity = 2 + rng.below(max_arity - 1);
    std::vector<std::uint64_t> dims(arity);
    for (auto &d : dims) d = 2 + rng.below(max_dim - 1);
    return gen::make_schema(dims);
}

AttrMask random_submask(SplitMix64 &rng, AttrMask universe) {
    AttrMask m = 0;
    for (std::size_t i : mask_indices(universe))
        if (rng.below(2) == 0) m |= AttrMask{1} << i;
    return m;
}

std::string check(bool ok, const std::string &msg) { return ok ? std::string{} : msg; }

// ---- relation properties ---------------------------------------------------

std::string prop_empirical_normalization(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng);
    auto r = gen::random_relation_with_duplicates(rng, schema, 1 + rng.below(40));
    auto p = empirical(r);
    std::vector<double> masses;
    for (std::size_t i = 0; i < r.distinct_count(); ++i) {
        double m = static_cast<double>(r.multiplicity(i)) / static_cast<double>(r.size());
        if (!(m > 0.0)) return "non-positive mass on support";
        masses.push_back(m);
    }
    double total = stable_sum(std::move(masses));
    return check(std::fabs(total - 1.0) <= 1e-12,
                 "masses sum to " + fmt_double(total));
}

std::string prop_project_idempotent(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng);
    auto r = gen::random_relation_with_duplicates(rng, schema, 1 + rng.below(30));
    AttrMask m = random_submask(rng, schema->full_mask());
    if (m == 0) m = 1;
    auto once = r.project(m);
    auto twice = once.project(once.schema().full_mask());
    if (once.distinct_count() != twice.distinct_count()) return "distinct count changed";
    for (std::size_t i = 0; i < once.distinct_count(); ++i)
        if (once.row_tuple(i) != twice.row_tuple(i) ||
            once.multiplicity(i) != twice.multiplicity(i))
            return "row mismatch after second projection";
    return {};
}

std::string prop_join_matches_oracle(SplitMix64 &rng, std::uint64_t) {
    // overlapping schemas: X0,X1,X2 and X1,X2,X3 (same declared domains)
    std::uint64_t d = 2 + rng.below(2);
    auto s4 = gen::make_schema({d, d, d, d});
    auto lhs = gen::random_set_relation(rng, s4, 1 + rng.below(8)).project(AttrMask{0b0111});
    auto rhs = gen::random_set_relation(rng, s4, 1 + rng.below(8)).project(AttrMask{0b1110});
    auto joined = natural_join(lhs, rhs);
    auto expect = oracle::oracle_join({lhs, rhs});
    return check(oracle::decoded_set(joined) == expect,
                 "join disagrees with the nested-loop oracle");
}

std::string prop_dupfree_entropy(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng);
    auto r = gen::random_set_relation(rng, schema, 1 + rng.below(12));
    double h = info::entropy(empirical(r), schema->full_mask());
    return check(std::fabs(h - std::log(static_cast<double>(r.size()))) <= 1e-12,
                 "H != log N for a duplicate-free relation");
}

// ---- info properties --------------------------------------------------------

std::string prop_cmi_nonneg(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng);
    auto p = empirical(gen::random_relation_with_duplicates(rng, schema, 2 + rng.below(40)));
    AttrMask uni = schema->full_mask();
    AttrMask a = random_submask(rng, uni), b = random_submask(rng, uni),
             c = random_submask(rng, uni);
    double i = info::cond_mutual_info(p, a, b, c);
    return check(i >= 0.0, "negative CMI " + fmt_double(i));
}

std::string prop_cmi_overlap_invariance(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng);
    auto p = empirical(gen::random_relation_with_duplicates(rng, schema, 2 + rng.below(40)));
    AttrMask uni = schema->full_mask();
    AttrMask c = random_submask(rng, uni);
    AttrMask a = random_submask(rng, uni) | (c & random_submask(rng, uni));
    AttrMask b = random_submask(rng, uni) | (c & random_submask(rng, uni));
    double with_overlap = info::cond_mutual_info(p, a, b, c);
    double stripped = info::cond_mutual_info(p, a & ~c, b & ~c, c);
    return check(with_overlap == stripped, "CMI changed when stripping the separator");
}

std::string prop_kl_properties(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng, 3, 3);
    auto r1 = gen::random_count_relation(rng, schema, 4);
    auto r2 = gen::random_count_relation(rng, schema, 4);
    auto p = empirical(r1).to_distribution();
    auto q = empirical(r2).to_distribution();
    if (info::kl_divergence(p, p) != 0.0) return "D(P||P) != 0";
    double d = info::kl_divergence(p, q);
    if (std::isinf(d)) return {};  // off-support: legitimately infinite
    if (d < 0.0) return "negative KL " + fmt_double(d);
    // exact rational comparison decides whether zero KL is allowed
    using oracle::Rational;
    std::map<Tuple, Rational> pm, qm;
    for (std::size_t i = 0; i < r1.distinct_count(); ++i)
        pm[r1.row_tuple(i)] = Rational(r1.multiplicity(i), r1.size());
    for (std::size_t i = 0; i < r2.distinct_count(); ++i)
        qm[r2.row_tuple(i)] = Rational(r2.multiplicity(i), r2.size());
    bool equal = pm == qm;
    if (equal && d > 1e-12) return "KL positive for identical distributions";
    if (!equal && d <= 1e-9) return "KL ~ 0 for distinct distributions";
    return {};
}

std::string prop_base_conversion(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng);
    auto p = empirical(gen::random_relation_with_duplicates(rng, schema, 2 + rng.below(40)));
    double nats = info::entropy(p, schema->full_mask());
    return check(in_base(nats, LogBase::Two) == nats / M_LN2, "bit conversion drifted");
}

// ---- join-tree properties ----------------------------------------------------

std::string prop_j_root_invariance(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng);
    auto tree = gen::random_join_tree(rng, schema);
    auto p = empirical(gen::random_relation_with_duplicates(rng, schema, 2 + rng.below(40)));
    double j0 = j_measure(tree, p);
    for (const auto &node : tree.nodes()) {
        auto order = dfs_order(tree, node.id);
        auto jb = j_bounds(tree, p, order);
        if (!(jb.lower <= j0 + 1e-9 && j0 <= jb.upper + 1e-9))
            return "sandwich violated from root " + std::to_string(node.id);
        double j1 = j_measure(tree, p);
        if (std::fabs(j1 - j0) > 1e-12) return "J changed across rootings";
    }
    return {};
}

std::string prop_pt_marginals(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng, 4, 3);
    auto tree = gen::random_join_tree(rng, schema);
    auto rel = gen::random_count_relation(rng, schema, 3);
    auto p = empirical(rel);
    auto pt = factorized_distribution(tree, p);

    // double path: materialized marginals within 1e-12 of the empirical ones
    auto dist = pt.materialize();
    if (std::fabs(pt.total_mass() - 1.0) > 1e-12) return "P_T mass does not sum to 1";
    auto order = pt.order();
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (AttrMask m : {order.bags[i], order.seps[i]}) {
            if (i == 0 && m == 0) continue;
            auto got = dist.marginal(m);
            std::map<Tuple, double> want;
            for (auto &[t, c] : p.marginal_counts(m))
                want[t] = static_cast<double>(c) / static_cast<double>(p.N());
            if (got.size() != want.size()) return "marginal support mismatch";
            for (auto &[t, v] : got)
                if (std::fabs(v - want[t]) > 1e-12) return "marginal off by more than 1e-12";
        }
    }

    // exact path: the rational oracle's P_T sums to exactly 1 and reproduces
    // the rational marginals
    auto dense = oracle::dense_from_empirical(p);
    auto dense_pt = oracle::oracle_enumerate_pt(tree, dense);
    if (dense_pt.total() != 1) return "rational P_T total differs from 1";
    for (const auto &node : tree.nodes()) {
        std::vector<std::string> names;
        for (std::size_t i : mask_indices(node.bag)) names.push_back(schema->at(i).name);
        if (oracle::oracle_marginal(dense_pt, names) != oracle::oracle_marginal(dense, names))
            return "rational bag marginal not preserved";
    }
    return {};
}

std::string prop_j_equals_kl(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng, 4, 3);
    auto tree = gen::random_join_tree(rng, schema);
    auto rel = gen::random_count_relation(rng, schema, 3);
    auto p = empirical(rel);
    double j = j_measure(tree, p);
    auto pt = factorized_distribution(tree, p);
    double via_counts = kl_to_factorized(p, pt);
    if (std::fabs(j - via_counts) > 1e-9)
        return "J != D(P||P_T): " + fmt_double(j) + " vs " + fmt_double(via_counts);
    auto dense = oracle::dense_from_empirical(p);
    double via_oracle = oracle::oracle_kl(dense, oracle::oracle_enumerate_pt(tree, dense));
    return check(std::fabs(j - via_oracle) <= 1e-9, "J disagrees with the rational-oracle KL");
}

std::string prop_pt_argmin(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng, 4, 3);
    auto tree = gen::random_join_tree(rng, schema);
    auto rel = gen::random_count_relation(rng, schema, 3);
    auto p = empirical(rel);
    double d_star = kl_to_factorized(p, factorized_distribution(tree, p));
    auto pd = p.to_distribution();
    for (int k = 0; k < 8; ++k) {
        auto q = gen::perturbed_tree_distribution(rng, tree, p);
        if (!models(q, tree, 1e-9)) return "perturbed Q does not model the tree";
        double d = info::kl_divergence(pd, q);
        if (d < d_star - 1e-12)
            return "found Q with smaller divergence: " + fmt_double(d) + " < " +
                   fmt_double(d_star);
    }
    return {};
}

std::string prop_lee_characterization(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng, 5, 4);
    auto tree = gen::random_join_tree(rng, schema);
    auto lossless = gen::lossless_closure(rng, schema, tree, 2 + rng.below(8));
    double j = j_measure(tree, empirical(lossless));
    double rho = spurious_ratio(lossless, tree);
    if (j > 1e-9) return "lossless closure has J = " + fmt_double(j);
    if (rho != 0.0) return "lossless closure has rho = " + fmt_double(rho);
    auto victim = gen::removable_tuple(lossless, tree);
    if (!victim) return {};  // no regenerable tuple in this instance
    auto perturbed = gen::without_row(lossless, *victim);
    double j2 = j_measure(tree, empirical(perturbed));
    double rho2 = spurious_ratio(perturbed, tree);
    if (j2 <= 1e-9) return "deleted tuple left J at " + fmt_double(j2);
    if (rho2 <= 0.0) return "join did not regenerate the deleted tuple";
    return {};
}

std::string prop_support_equivalence(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng, 4, 4);
    auto tree = gen::random_join_tree(rng, schema);
    auto r = rng.below(2) == 0
                 ? gen::lossless_closure(rng, schema, tree, 2 + rng.below(6))
                 : gen::random_set_relation(rng, schema, 2 + rng.below(30));
    auto order = dfs_order(tree);
    auto jb = j_bounds(tree, empirical(r), order);
    bool all_zero = true;
    for (double i : jb.terms) all_zero = all_zero && i <= 1e-9;
    bool lossless = spurious_ratio(r, tree) == 0.0;
    return check(all_zero == lossless,
                 "support MVDs and losslessness disagree (rho = " +
                     fmt_double(spurious_ratio(r, tree)) + ")");
}

std::string prop_join_size_agreement_impl(SplitMix64 &rng, bool inject_fault) {
    auto schema = random_small_schema(rng, 4, 4);
    auto tree = gen::random_join_tree(rng, schema);
    auto r = gen::random_set_relation(rng, schema, 1 + rng.below(30));
    u128 counted = join_size(r, tree);
    if (counted > 10000) return {};  // outside the oracle guard
    auto materialized = acyclic_join(r, tree);
    std::vector<Relation> projections;
    for (const auto &node : tree.nodes()) projections.push_back(r.project(node.bag));
    std::size_t via_oracle = oracle::oracle_join(projections).size();
    if (inject_fault) via_oracle += 1;  // known-bad reference, the suite must notice
    if (u128{materialized.distinct_count()} != counted)
        return "materialized size differs from the counted size";
    return check(u128{via_oracle} == counted,
                 "message-passing count disagrees with the nested-loop oracle");
}

// ---- bounds properties -------------------------------------------------------

std::string prop_inequality_chain(SplitMix64 &rng, std::uint64_t) {
    std::size_t arity = 2 + rng.below(4);
    std::vector<std::uint64_t> dims(arity);
    for (auto &d : dims) d = 2 + rng.below(5);
    auto schema = gen::make_schema(dims);
    u128 cells = 1;
    for (auto d : dims) cells *= d;
    std::uint64_t max_n = std::min<std::uint64_t>(200, static_cast<std::uint64_t>(cells));
    auto r = gen::random_set_relation(rng, schema, 1 + rng.below(max_n));
    auto tree = gen::random_join_tree(rng, schema);
    auto order = dfs_order(tree);
    auto p = empirical(r);
    double j = j_measure(tree, p);
    auto jb = j_bounds(tree, p, order);
    if (!(jb.lower <= j + 1e-9 && j <= jb.upper + 1e-9))
        return "sandwich violated: " + fmt_double(jb.lower) + " / " + fmt_double(j) + " / " +
               fmt_double(jb.upper);
    auto chain = bounds::chain_inequality(r, tree, order);
    if (!(j <= chain.lhs + 1e-9))
        return "J > log(1+rho): " + fmt_double(j) + " > " + fmt_double(chain.lhs);
    if (!chain.pass)
        return "chain inequality violated: " + fmt_double(chain.lhs) + " > " +
               fmt_double(chain.rhs);
    return {};
}

std::string prop_bound_purity(SplitMix64 &rng, std::uint64_t) {
    std::uint64_t da = 2 + rng.below(4096), db = 2 + rng.below(4096), dc = 1 + rng.below(16);
    std::uint64_t n = 1 + rng.below(1 << 20);
    double delta = 0.5 * (static_cast<double>(rng.below(1000)) + 1.0) / 1000.0;
    auto dims = bounds::MvdDims::normalized(da, db, dc);
    auto e1 = bounds::epsilon_star(dims, n, delta);
    auto e2 = bounds::epsilon_star(dims, n, delta);
    if (e1.epsilon != e2.epsilon || e1.n_threshold != e2.n_threshold)
        return "epsilon* not bit-stable";
    std::uint64_t eta = 1 + rng.below(da * db);
    auto h1 = bounds::entropy_confidence(da, db, eta, delta);
    auto h2 = bounds::entropy_confidence(da, db, eta, delta);
    if (h1.lower != h2.lower) return "entropy bound not bit-stable";
    auto m1 = bounds::mi_confidence(da, db, eta, delta);
    auto m2 = bounds::mi_confidence(da, db, eta, delta);
    if (m1.lower != m2.lower || m1.rho_bar != m2.rho_bar) return "MI bound not bit-stable";
    return {};
}

std::string prop_rho_min(SplitMix64 &rng, std::uint64_t) {
    auto schema = random_small_schema(rng, 4, 4);
    auto tree = gen::random_join_tree(rng, schema);
    auto r = gen::random_set_relation(rng, schema, 1 + rng.below(40));
    double j = j_measure(tree, empirical(r));
    double rho = spurious_ratio(r, tree);
    auto lb = bounds::lower_bound_check(j, rho);
    return check(rho >= lb.rho_min - 1e-9 && lb.pass,
                 "rho " + fmt_double(rho) + " below rho_min " + fmt_double(lb.rho_min));
}

// ---- random-model properties ---------------------------------------------------

// two-sample chi-squared homogeneity on pooled histograms; 0.01 critical
// values for df 1..8
const double kChi2Crit01[] = {6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090};

std::string prop_exchangeability(SplitMix64 &rng, std::uint64_t) {
    // Distribution of the count at one cell label must match the distribution
    // at any permuted label, across independent runs.
    const std::uint64_t trials = 4000;
    randmodel::RandomModelSpec spec;
    spec.dims = {4, 4};
    spec.n = 6;
    spec.trials = 1;
    std::uint64_t label = rng.below(4);

    auto histogram = [&](std::uint64_t seed, std::uint64_t a_label) {
        std::map<std::uint64_t, std::uint64_t> h;
        randmodel::RandomModelSpec s = spec;
        s.seed = seed;
        for (std::uint64_t t = 0; t < trials; ++t) {
            auto cells = randmodel::sample_cells(s, static_cast<std::uint32_t>(t));
            std::uint64_t count = 0;
            for (u128 c : cells) count += static_cast<std::uint64_t>(c / 4) == a_label;
            ++h[count];
        }
        return h;
    };
    auto h1 = histogram(rng.next(), 0);
    auto h2 = histogram(rng.next(), label);

    std::set<std::uint64_t> keys;
    for (auto &[k, v] : h1) keys.insert(k);
    for (auto &[k, v] : h2) keys.insert(k);
    std::vector<std::pair<double, double>> bins;
    for (auto k : keys) {
        double o1 = static_cast<double>(h1.count(k) ? h1[k] : 0);
        double o2 = static_cast<double>(h2.count(k) ? h2[k] : 0);
        // pool sparse tails so expected counts stay reasonable
        if (!bins.empty() && (o1 + o2) < 10.0) {
            bins.back().first += o1;
            bins.back().second += o2;
        } else {
            bins.emplace_back(o1, o2);
        }
    }
    if (bins.size() < 2) return "degenerate histogram";
    double stat = 0.0;
    const double t1 = trials, t2 = trials;
    for (auto &[o1, o2] : bins) {
        double e1 = (o1 + o2) * t1 / (t1 + t2);
        double e2 = (o1 + o2) * t2 / (t1 + t2);
        stat += (o1 - e1) * (o1 - e1) / e1 + (o2 - e2) * (o2 - e2) / e2;
    }
    std::size_t df = std::min<std::size_t>(bins.size() - 1, 8);
    return check(stat <= kChi2Crit01[df - 1],
                 "chi-squared " + fmt_double(stat) + " exceeds the 0.01 critical value");
}

std::string prop_joint_entropy_exact(SplitMix64 &rng, std::uint64_t) {
    randmodel::RandomModelSpec spec;
    spec.dims = {4 + rng.below(8), 4 + rng.below(8)};
    spec.seed = rng.next();
    spec.n = 1 + rng.below(spec.dims[0] * spec.dims[1]);
    auto r = randmodel::sample_relation(spec, 0);
    double h = info::entropy(empirical(r), r.schema().full_mask());
    return check(h == std::log(static_cast<double>(spec.n)),
                 "H(A,B) != log N on a sampled relation");
}

std::string prop_mi_decomposition(SplitMix64 &rng, std::uint64_t) {
    randmodel::RandomModelSpec spec;
    spec.dims = {4 + rng.below(8), 4 + rng.below(8)};
    spec.seed = rng.next();
    spec.n = 2 + rng.below(spec.dims[0] * spec.dims[1] - 1);
    spec.trials = 1;
    auto trial = randmodel::run_mvd_trials(spec, 0.1)[0];
    auto r = randmodel::sample_relation(spec, 0);
    auto p = empirical(r);
    double i_direct = info::cond_mutual_info(p, AttrMask{1}, AttrMask{2}, 0);
    double i_decomp = trial.h_a + trial.h_b - std::log(static_cast<double>(spec.n));
    if (std::fabs(trial.i_nats - i_direct) > 1e-9)
        return "trial I differs from the empirical CMI";
    return check(std::fabs(trial.i_nats - std::max(0.0, i_decomp)) <= 1e-9,
                 "I != H(A)+H(B)-log N");
}

std::string prop_hypergeometric_mean(SplitMix64 &rng, std::uint64_t) {
    const std::uint64_t trials = 2000;
    randmodel::RandomModelSpec spec;
    spec.dims = {4, 4, 4};
    spec.n = 24;
    spec.seed = rng.next();
    // N_S(0) ~ Hypergeometric(d_A d_B d_C, d_A d_B, N)
    double sum = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto cells = randmodel::sample_cells(spec, static_cast<std::uint32_t>(t));
        std::uint64_t count = 0;
        for (u128 c : cells) count += static_cast<std::uint64_t>(c % 4) == 0;
        sum += static_cast<double>(count);
    }
    const double population = 64, successes = 16, draws = 24;
    const double mean = draws * successes / population;
    const double var = draws * (successes / population) * (1.0 - successes / population) *
                       (population - draws) / (population - 1.0);
    const double five_sigma = 5.0 * std::sqrt(var / static_cast<double>(trials));
    double observed = sum / static_cast<double>(trials);
    return check(std::fabs(observed - mean) <= five_sigma,
                 "per-value count mean " + fmt_double(observed) + " deviates from " +
                     fmt_double(mean) + " by more than 5 sigma");
}

}  // namespace

std::vector<PropertyResult> run_all(const Options &options) {
    Harness h;
    h.options = options;

    h.property("relation/empirical-normalization", h.scale(60, 12), prop_empirical_normalization);
    h.property("relation/project-idempotent", h.scale(60, 12), prop_project_idempotent);
    h.property("relation/join-matches-oracle", h.scale(100, 20), prop_join_matches_oracle);
    h.property("relation/dupfree-entropy-log-n", h.scale(60, 12), prop_dupfree_entropy);

    h.property("info/cmi-nonnegative", h.scale(100, 20), prop_cmi_nonneg);
    h.property("info/cmi-overlap-invariance", h.scale(100, 20), prop_cmi_overlap_invariance);
    h.property("info/kl-nonnegative-zero-iff-equal", h.scale(80, 16), prop_kl_properties);
    h.property("info/base-conversion", h.scale(40, 8), prop_base_conversion);

    h.property("jointree/j-root-invariance", h.scale(50, 10), prop_j_root_invariance);
    h.property("jointree/pt-marginal-preservation", h.scale(50, 10), prop_pt_marginals);
    h.property("jointree/j-equals-kl", h.scale(60, 12), prop_j_equals_kl);
    h.property("jointree/pt-argmin", h.scale(30, 6), prop_pt_argmin);
    h.property("jointree/lee-characterization", h.scale(50, 10), prop_lee_characterization);
    h.property("jointree/support-equivalence", h.scale(60, 12), prop_support_equivalence);
    h.property("jointree/join-size-agreement", h.scale(80, 16),
               [&](SplitMix64 &rng, std::uint64_t) {
                   return prop_join_size_agreement_impl(rng, options.inject_fault);
               });

    h.property("bounds/inequality-chain", h.scale(80, 16), prop_inequality_chain);
    h.property("bounds/function-purity", h.scale(50, 10), prop_bound_purity);
    h.property("bounds/rho-min", h.scale(60, 12), prop_rho_min);

    h.property("randmodel/exchangeability", 1, prop_exchangeability);
    h.property("randmodel/joint-entropy-exact", h.scale(40, 8), prop_joint_entropy_exact);
    h.property("randmodel/mi-decomposition", h.scale(40, 8), prop_mi_decomposition);
    h.property("randmodel/hypergeometric-mean", 1, prop_hypergeometric_mean);

    return h.results;
}

}  // namespace verify
}  // namespace ajd
