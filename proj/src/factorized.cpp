#include "ajd/factorized.hpp"

#include <cmath>
#include <limits>

namespace ajd {

namespace {

Tuple select(const Tuple &full, const std::vector<std::size_t> &idx) {
    Tuple t(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) t[j] = full[idx[j]];
    return t;
}

}  // namespace

FactorizedDistribution::FactorizedDistribution(JoinTree tree, RootedOrder order,
                                               const EmpiricalDistribution &p)
    : tree_(std::move(tree)), order_(std::move(order)), n_(p.N()) {
    const std::size_t m = order_.size();
    bag_counts_.resize(m);
    sep_counts_.resize(m);
    bag_idx_.resize(m);
    sep_idx_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        bag_idx_[i] = mask_indices(order_.bags[i]);
        sep_idx_[i] = mask_indices(order_.seps[i]);
        for (auto &[t, c] : p.marginal_counts(order_.bags[i])) bag_counts_[i].emplace(t, c);
        if (i > 0)
            for (auto &[t, c] : p.marginal_counts(order_.seps[i])) sep_counts_[i].emplace(t, c);
    }
}

double FactorizedDistribution::log_mass(const Tuple &t) const {
    if (t.size() != tree_.schema().arity())
        throw Error("factorized distribution expects full-arity tuples");
    double lg = -std::log(static_cast<double>(n_));
    for (std::size_t i = 0; i < order_.size(); ++i) {
        auto it = bag_counts_[i].find(select(t, bag_idx_[i]));
        if (it == bag_counts_[i].end()) return -std::numeric_limits<double>::infinity();
        lg += std::log(static_cast<double>(it->second));
        if (i > 0) {
            auto st = sep_counts_[i].find(select(t, sep_idx_[i]));
            if (st == sep_counts_[i].end())
                return -std::numeric_limits<double>::infinity();
            lg -= std::log(static_cast<double>(st->second));
        }
    }
    // Π (K_bag/N) / Π (K_sep/N) has m bag factors and m-1 separator factors,
    // so the N's collapse to the single -log N initialized above.
    return lg;
}

double FactorizedDistribution::mass(const Tuple &t) const {
    double lg = log_mass(t);
    return std::isinf(lg) ? 0.0 : std::exp(lg);
}

Distribution FactorizedDistribution::materialize(std::size_t cap) const {
    const std::size_t m = order_.size();
    // Grow partial assignments bag by bag in DFS order; each extension matches
    // the child's bag support against the already-fixed separator values.
    struct Partial {
        Tuple values;  // full arity; untouched positions are meaningless
        double log_mass;
    };
    const std::size_t arity = tree_.schema().arity();
    std::vector<Partial> acc;
    for (const auto &[bt, c] : bag_counts_[0]) {
        Partial part{Tuple(arity, 0), std::log(static_cast<double>(c)) -
                                          std::log(static_cast<double>(n_))};
        for (std::size_t j = 0; j < bag_idx_[0].size(); ++j) part.values[bag_idx_[0][j]] = bt[j];
        acc.push_back(std::move(part));
    }
    for (std::size_t i = 1; i < m; ++i) {
        // bucket bag tuples by separator value
        std::unordered_map<Tuple, std::vector<const std::pair<const Tuple, std::uint64_t> *>,
                           TupleHash>
            by_sep;
        std::vector<std::size_t> sep_in_bag;
        for (std::size_t a : sep_idx_[i])
            sep_in_bag.push_back(static_cast<std::size_t>(
                std::lower_bound(bag_idx_[i].begin(), bag_idx_[i].end(), a) -
                bag_idx_[i].begin()));
        for (const auto &e : bag_counts_[i]) {
            Tuple key(sep_in_bag.size());
            for (std::size_t j = 0; j < key.size(); ++j) key[j] = e.first[sep_in_bag[j]];
            by_sep[key].push_back(&e);
        }
        std::vector<Partial> next;
        for (const auto &part : acc) {
            Tuple key = select(part.values, sep_idx_[i]);
            auto it = by_sep.find(key);
            if (it == by_sep.end()) continue;
            auto st = sep_counts_[i].find(key);
            if (st == sep_counts_[i].end()) continue;
            double sep_log =
                std::log(static_cast<double>(st->second)) - std::log(static_cast<double>(n_));
            for (const auto *e : it->second) {
                Partial ext = part;
                for (std::size_t j = 0; j < bag_idx_[i].size(); ++j)
                    ext.values[bag_idx_[i][j]] = e->first[j];
                ext.log_mass += std::log(static_cast<double>(e->second)) -
                                std::log(static_cast<double>(n_)) - sep_log;
                next.push_back(std::move(ext));
                if (next.size() > cap)
                    throw Error("factorized support exceeds cap of " + std::to_string(cap));
            }
        }
        acc = std::move(next);
    }

    AttrMask uni = tree_.universe();
    auto out_schema = uni == tree_.schema().full_mask() ? tree_.schema_ptr()
                                                        : tree_.schema().subschema(uni);
    auto uni_idx = mask_indices(uni);
    std::vector<std::pair<Tuple, double>> mass;
    mass.reserve(acc.size());
    for (const auto &part : acc)
        mass.emplace_back(select(part.values, uni_idx), std::exp(part.log_mass));
    return Distribution(std::move(out_schema), std::move(mass), 1e-9);
}

double FactorizedDistribution::total_mass(std::size_t cap) const {
    auto dist = materialize(cap);
    std::vector<double> terms;
    terms.reserve(dist.support_size());
    for (const auto &[t, p] : dist.support()) terms.push_back(p);
    return stable_sum(std::move(terms));
}

FactorizedDistribution factorized_distribution(const JoinTree &tree,
                                               const EmpiricalDistribution &p) {
    auto order = dfs_order(tree);
    require_schema_compatible(tree, p.schema());
    return FactorizedDistribution(tree, std::move(order), p);
}

double kl_to_factorized(const EmpiricalDistribution &p, const FactorizedDistribution &pt) {
    if (pt.tree().universe() != p.schema().full_mask())
        throw Error("KL to the factorized distribution needs a tree spanning the full schema");
    const auto &rel = p.relation();
    const double n = static_cast<double>(p.N());
    const auto &order = pt.order();
    std::vector<std::vector<std::size_t>> bag_idx(order.size()), sep_idx(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        bag_idx[i] = mask_indices(order.bags[i]);
        sep_idx[i] = mask_indices(order.seps[i]);
    }
    std::vector<double> terms;
    terms.reserve(rel.distinct_count());
    for (std::size_t r = 0; r < rel.distinct_count(); ++r) {
        Tuple t = rel.row_tuple(r);
        double k = static_cast<double>(rel.multiplicity(r));
        // log P(t) - log P_T(t) with all N factors cancelled:
        // log K_t - Σ log K_bag + Σ log K_sep
        double term = std::log(k);
        for (std::size_t i = 0; i < order.size(); ++i) {
            auto bt = pt.bag_counts(i).find(select(t, bag_idx[i]));
            if (bt == pt.bag_counts(i).end())
                throw InternalError("empirical support point missing from a bag marginal");
            term -= std::log(static_cast<double>(bt->second));
            if (i > 0) {
                auto st = pt.sep_counts(i).find(select(t, sep_idx[i]));
                if (st == pt.sep_counts(i).end())
                    throw InternalError("empirical support point missing from a separator");
                term += std::log(static_cast<double>(st->second));
            }
        }
        terms.push_back((k / n) * term);
    }
    double d = stable_sum(std::move(terms));
    if (d < 0.0 && d >= -1e-9) d = 0.0;
    if (d < 0.0)
        throw InternalError("KL to factorized distribution came out negative: " + fmt_double(d));
    return d;
}

}  // namespace ajd
