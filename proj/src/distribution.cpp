#include "ajd/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ajd {

Distribution::Distribution(SchemaPtr schema, std::vector<std::pair<Tuple, double>> mass,
                           double tol)
    : schema_(std::move(schema)), mass_(std::move(mass)) {
    const std::size_t k = schema_->arity();
    std::vector<double> terms;
    terms.reserve(mass_.size());
    for (const auto &[t, p] : mass_) {
        if (t.size() != k) throw Error("distribution tuple arity does not match schema");
        if (!(p > 0.0)) throw Error("distribution mass must be strictly positive on the support");
        for (std::size_t i = 0; i < k; ++i)
            if (t[i] >= schema_->at(i).domain_size)
                throw Error("distribution tuple outside attribute domain");
        terms.push_back(p);
    }
    std::sort(mass_.begin(), mass_.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    for (std::size_t i = 1; i < mass_.size(); ++i)
        if (mass_[i].first == mass_[i - 1].first)
            throw Error("duplicate tuple in distribution support");
    double total = stable_sum(std::move(terms));
    if (std::fabs(total - 1.0) > tol)
        throw Error("distribution mass sums to " + fmt_double(total) + ", not 1");
}

double Distribution::mass(const Tuple &t) const {
    auto it = std::lower_bound(mass_.begin(), mass_.end(), t,
                               [](const auto &a, const Tuple &b) { return a.first < b; });
    if (it == mass_.end() || it->first != t) return 0.0;
    return it->second;
}

std::vector<std::pair<Tuple, double>> Distribution::marginal(AttrMask mask) const {
    auto idx = mask_indices(mask);
    for (std::size_t i : idx)
        if (i >= schema_->arity()) throw Error("marginal attribute outside schema");
    std::unordered_map<Tuple, double, TupleHash> groups;
    Tuple key(idx.size());
    for (const auto &[t, p] : mass_) {
        for (std::size_t j = 0; j < idx.size(); ++j) key[j] = t[idx[j]];
        groups[key] += p;
    }
    std::vector<std::pair<Tuple, double>> out(groups.begin(), groups.end());
    std::sort(out.begin(), out.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    return out;
}

bool Distribution::same_schema(const Distribution &other) const {
    const auto &a = *schema_;
    const auto &b = *other.schema_;
    if (a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (a.at(i).name != b.at(i).name || !a.domain_equal(i, b, i)) return false;
    return true;
}

EmpiricalDistribution EmpiricalDistribution::from(const Relation &r) {
    return from(std::make_shared<Relation>(r));
}

EmpiricalDistribution EmpiricalDistribution::from(std::shared_ptr<const Relation> r) {
    if (!r || r->empty()) throw Error("empty relation has no empirical distribution");
    return EmpiricalDistribution(std::move(r));
}

double EmpiricalDistribution::mass(const Tuple &t) const {
    const auto &r = *rel_;
    const std::size_t k = r.arity();
    if (t.size() != k) return 0.0;
    // binary search over sorted distinct rows
    std::size_t lo = 0, hi = r.distinct_count();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto row = r.row(mid);
        if (std::lexicographical_compare(row.begin(), row.end(), t.begin(), t.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == r.distinct_count() || !std::equal(t.begin(), t.end(), r.row(lo).begin()))
        return 0.0;
    return static_cast<double>(r.multiplicity(lo)) / static_cast<double>(r.size());
}

std::vector<std::pair<Tuple, std::uint64_t>> EmpiricalDistribution::marginal_counts(
    AttrMask mask) const {
    auto idx = mask_indices(mask);
    for (std::size_t i : idx)
        if (i >= schema().arity()) throw Error("marginal attribute outside schema");
    std::unordered_map<Tuple, std::uint64_t, TupleHash> groups;
    groups.reserve(rel_->distinct_count());
    Tuple key(idx.size());
    for (std::size_t r = 0; r < rel_->distinct_count(); ++r) {
        auto full = rel_->row(r);
        for (std::size_t j = 0; j < idx.size(); ++j) key[j] = full[idx[j]];
        groups[key] += rel_->multiplicity(r);
    }
    std::vector<std::pair<Tuple, std::uint64_t>> out(groups.begin(), groups.end());
    std::sort(out.begin(), out.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    return out;
}

Distribution EmpiricalDistribution::to_distribution() const {
    std::vector<std::pair<Tuple, double>> mass;
    mass.reserve(rel_->distinct_count());
    const double n = static_cast<double>(rel_->size());
    for (std::size_t r = 0; r < rel_->distinct_count(); ++r)
        mass.emplace_back(rel_->row_tuple(r), static_cast<double>(rel_->multiplicity(r)) / n);
    return Distribution(rel_->schema_ptr(), std::move(mass));
}

EmpiricalDistribution empirical(const Relation &r) { return EmpiricalDistribution::from(r); }

}  // namespace ajd
