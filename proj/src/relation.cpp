#include "ajd/relation.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_set>

namespace ajd {

namespace {

bool tuple_less(std::span<const Value> a, std::span<const Value> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

AttributeSchema::AttributeSchema(std::vector<Attribute> attrs) : attrs_(std::move(attrs)) {
    if (attrs_.size() > kMaxAttributes)
        throw Error("schema has " + std::to_string(attrs_.size()) + " attributes; limit is " +
                    std::to_string(kMaxAttributes));
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
        auto &a = attrs_[i];
        if (a.name.empty()) throw Error("attribute name must not be empty");
        if (!index_.emplace(a.name, i).second)
            throw Error("duplicate attribute name '" + a.name + "'");
        if (!a.declared) a.domain_size = a.labels.size();
        if (a.domain_size == 0)
            throw Error("attribute '" + a.name + "' has an empty domain");
        if (a.domain_size > std::numeric_limits<Value>::max())
            throw Error("domain of '" + a.name + "' exceeds the value-code range");
    }
}

std::optional<std::size_t> AttributeSchema::index_of(const std::string &name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t AttributeSchema::require_index(const std::string &name) const {
    auto idx = index_of(name);
    if (!idx) throw Error("unknown attribute '" + name + "'");
    return *idx;
}

AttrMask AttributeSchema::mask_of(std::span<const std::string> names) const {
    AttrMask m = 0;
    for (const auto &n : names) m |= AttrMask{1} << require_index(n);
    return m;
}

AttrMask AttributeSchema::full_mask() const {
    return arity() == kMaxAttributes ? ~AttrMask{0} : (AttrMask{1} << arity()) - 1;
}

std::string AttributeSchema::label(std::size_t attr, Value code) const {
    const auto &a = attrs_[attr];
    if (code >= a.domain_size)
        throw InternalError("value code out of range for attribute '" + a.name + "'");
    if (a.labels.empty()) return std::to_string(code);
    return a.labels[code];
}

std::optional<Value> AttributeSchema::code_of(std::size_t attr, const std::string &label) const {
    const auto &a = attrs_[attr];
    if (a.labels.empty()) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
        if (ec != std::errc{} || p != label.data() + label.size())
            throw Error("value '" + label + "' for declared-domain attribute '" + a.name +
                        "' is not an integer");
        if (v >= a.domain_size)
            throw Error("value " + label + " outside declared domain of '" + a.name + "' (size " +
                        std::to_string(a.domain_size) + ")");
        return static_cast<Value>(v);
    }
    for (std::size_t i = 0; i < a.labels.size(); ++i)
        if (a.labels[i] == label) return static_cast<Value>(i);
    return std::nullopt;
}

SchemaPtr AttributeSchema::subschema(AttrMask mask) const {
    std::vector<Attribute> sub;
    for (std::size_t i : mask_indices(mask)) {
        if (i >= arity()) throw Error("attribute mask exceeds schema arity");
        sub.push_back(attrs_[i]);
    }
    return std::make_shared<AttributeSchema>(std::move(sub));
}

bool AttributeSchema::domain_equal(std::size_t i, const AttributeSchema &other,
                                   std::size_t j) const {
    const auto &a = attrs_[i];
    const auto &b = other.attrs_[j];
    return a.declared == b.declared && a.domain_size == b.domain_size && a.labels == b.labels;
}

Relation::Relation(SchemaPtr schema, std::vector<Tuple> rows) : schema_(std::move(schema)) {
    std::vector<std::pair<Tuple, std::uint64_t>> counted;
    counted.reserve(rows.size());
    for (auto &r : rows) counted.emplace_back(std::move(r), 1);
    finalize(std::move(counted));
}

Relation Relation::from_counted(SchemaPtr schema,
                                std::vector<std::pair<Tuple, std::uint64_t>> counted) {
    Relation r(std::move(schema));
    r.finalize(std::move(counted));
    return r;
}

void Relation::finalize(std::vector<std::pair<Tuple, std::uint64_t>> counted) {
    const std::size_t k = schema_->arity();
    for (const auto &[t, c] : counted) {
        if (t.size() != k) throw Error("tuple arity does not match schema");
        if (c == 0) throw Error("zero multiplicity");
        for (std::size_t i = 0; i < k; ++i)
            if (t[i] >= schema_->at(i).domain_size)
                throw Error("value outside domain of attribute '" + schema_->at(i).name + "'");
    }
    std::sort(counted.begin(), counted.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    data_.reserve(counted.size() * k);
    for (auto &[t, c] : counted) {
        if (!mult_.empty() && std::equal(t.begin(), t.end(), data_.end() - k, data_.end())) {
            mult_.back() += c;
        } else {
            data_.insert(data_.end(), t.begin(), t.end());
            mult_.push_back(c);
        }
        total_ += c;
    }
}

Tuple Relation::row_tuple(std::size_t i) const {
    auto r = row(i);
    return Tuple(r.begin(), r.end());
}

bool Relation::contains(std::span<const Value> t) const {
    const std::size_t k = arity();
    if (t.size() != k) return false;
    std::size_t lo = 0, hi = distinct_count();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (tuple_less(row(mid), t))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < distinct_count() && std::equal(t.begin(), t.end(), row(lo).begin());
}

Relation Relation::project(AttrMask mask) const {
    auto idx = mask_indices(mask);
    for (std::size_t i : idx)
        if (i >= arity()) throw Error("projection attribute outside schema");
    std::unordered_map<Tuple, std::uint64_t, TupleHash> groups;
    groups.reserve(distinct_count());
    Tuple key(idx.size());
    for (std::size_t r = 0; r < distinct_count(); ++r) {
        auto full = row(r);
        for (std::size_t j = 0; j < idx.size(); ++j) key[j] = full[idx[j]];
        groups[key] += mult_[r];
    }
    std::vector<std::pair<Tuple, std::uint64_t>> counted(groups.begin(), groups.end());
    return from_counted(schema_->subschema(mask), std::move(counted));
}

Relation Relation::project(std::span<const std::string> names) const {
    return project(schema_->mask_of(names));
}

Relation Relation::select_eq(const std::string &attr, const std::string &value) const {
    const std::size_t a = schema_->require_index(attr);
    auto code = schema_->code_of(a, value);
    std::vector<std::pair<Tuple, std::uint64_t>> kept;
    if (code) {
        for (std::size_t r = 0; r < distinct_count(); ++r)
            if (row(r)[a] == *code) kept.emplace_back(row_tuple(r), mult_[r]);
    }
    return from_counted(schema_, std::move(kept));
}

std::vector<std::vector<std::string>> Relation::decoded_rows() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(distinct_count());
    for (std::size_t r = 0; r < distinct_count(); ++r) {
        std::vector<std::string> t;
        t.reserve(arity());
        for (std::size_t i = 0; i < arity(); ++i) t.push_back(schema_->label(i, row(r)[i]));
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct SharedAttr {
    std::size_t lhs_idx;
    std::size_t rhs_idx;
    std::size_t out_idx;
    // remaps of per-side codes into the merged output domain
    std::vector<Value> lhs_map;
    std::vector<Value> rhs_map;
};

AttributeSchema::Attribute merge_domains(const AttributeSchema::Attribute &a,
                                         const AttributeSchema::Attribute &b,
                                         std::vector<Value> &map_a, std::vector<Value> &map_b) {
    auto identity = [](std::uint64_t n) {
        std::vector<Value> m(n);
        for (std::uint64_t i = 0; i < n; ++i) m[i] = static_cast<Value>(i);
        return m;
    };
    if (a.declared && b.declared) {
        if (a.domain_size != b.domain_size)
            throw Error("conflicting domain declarations for shared attribute '" + a.name + "'");
        map_a = identity(a.domain_size);
        map_b = identity(b.domain_size);
        return a;
    }
    if (a.declared != b.declared) {
        // One side declared: fold the inferred labels into the declared 0..d-1 range.
        const auto &dec = a.declared ? a : b;
        const auto &inf = a.declared ? b : a;
        std::vector<Value> inf_map(inf.labels.size());
        for (std::size_t i = 0; i < inf.labels.size(); ++i) {
            std::uint64_t v = 0;
            auto [p, ec] =
                std::from_chars(inf.labels[i].data(), inf.labels[i].data() + inf.labels[i].size(), v);
            if (ec != std::errc{} || p != inf.labels[i].data() + inf.labels[i].size() ||
                v >= dec.domain_size)
                throw Error("value '" + inf.labels[i] + "' of shared attribute '" + a.name +
                            "' does not fit the declared domain");
            inf_map[i] = static_cast<Value>(v);
        }
        map_a = a.declared ? identity(a.domain_size) : inf_map;
        map_b = b.declared ? identity(b.domain_size) : inf_map;
        return dec;
    }
    // Both inferred: union of label sets, lhs labels first.
    AttributeSchema::Attribute merged;
    merged.name = a.name;
    merged.declared = false;
    merged.labels = a.labels;
    std::unordered_map<std::string, Value> pos;
    for (std::size_t i = 0; i < merged.labels.size(); ++i)
        pos[merged.labels[i]] = static_cast<Value>(i);
    map_a = identity(a.labels.size());
    map_b.resize(b.labels.size());
    for (std::size_t i = 0; i < b.labels.size(); ++i) {
        auto it = pos.find(b.labels[i]);
        if (it == pos.end()) {
            merged.labels.push_back(b.labels[i]);
            it = pos.emplace(b.labels[i], static_cast<Value>(merged.labels.size() - 1)).first;
        }
        map_b[i] = it->second;
    }
    merged.domain_size = merged.labels.size();
    return merged;
}

}  // namespace

Relation natural_join(const Relation &lhs, const Relation &rhs) {
    const auto &ls = lhs.schema();
    const auto &rs = rhs.schema();

    std::vector<AttributeSchema::Attribute> out_attrs;
    std::vector<SharedAttr> shared;
    std::vector<Value> lhs_remap_flat;  // per lhs attr: either identity or merged map
    std::vector<std::vector<Value>> lhs_maps(ls.arity()), rhs_maps(rs.arity());
    std::vector<std::size_t> rhs_new;  // rhs attrs not shared, in rhs order

    for (std::size_t i = 0; i < ls.arity(); ++i) {
        const auto &a = ls.at(i);
        auto j = rs.index_of(a.name);
        if (j) {
            SharedAttr sa;
            sa.lhs_idx = i;
            sa.rhs_idx = *j;
            sa.out_idx = out_attrs.size();
            out_attrs.push_back(merge_domains(a, rs.at(*j), sa.lhs_map, sa.rhs_map));
            lhs_maps[i] = sa.lhs_map;
            rhs_maps[*j] = sa.rhs_map;
            shared.push_back(std::move(sa));
        } else {
            out_attrs.push_back(a);
        }
    }
    for (std::size_t j = 0; j < rs.arity(); ++j)
        if (!ls.index_of(rs.at(j).name)) {
            rhs_new.push_back(j);
            out_attrs.push_back(rs.at(j));
        }

    auto out_schema = std::make_shared<AttributeSchema>(std::move(out_attrs));

    // Hash rhs rows by their shared-attribute key (in merged codes).
    std::unordered_map<Tuple, std::vector<std::size_t>, TupleHash> by_key;
    by_key.reserve(rhs.distinct_count());
    Tuple key(shared.size());
    for (std::size_t r = 0; r < rhs.distinct_count(); ++r) {
        auto t = rhs.row(r);
        for (std::size_t s = 0; s < shared.size(); ++s)
            key[s] = shared[s].rhs_map[t[shared[s].rhs_idx]];
        by_key[key].push_back(r);
    }

    std::vector<Tuple> rows;
    const std::size_t out_arity = out_schema->arity();
    for (std::size_t l = 0; l < lhs.distinct_count(); ++l) {
        auto lt = lhs.row(l);
        for (std::size_t s = 0; s < shared.size(); ++s)
            key[s] = shared[s].lhs_map[lt[shared[s].lhs_idx]];
        auto it = by_key.find(key);
        if (it == by_key.end()) continue;
        for (std::size_t r : it->second) {
            auto rt = rhs.row(r);
            Tuple out(out_arity);
            for (std::size_t i = 0; i < ls.arity(); ++i)
                out[i] = lhs_maps[i].empty() ? lt[i] : lhs_maps[i][lt[i]];
            for (std::size_t k = 0; k < rhs_new.size(); ++k) {
                std::size_t j = rhs_new[k];
                out[ls.arity() + k] = rhs_maps[j].empty() ? rt[j] : rhs_maps[j][rt[j]];
            }
            rows.push_back(std::move(out));
        }
    }
    return Relation(std::move(out_schema), std::move(rows));
}

Relation make_diagonal_relation(std::uint64_t n) {
    if (n < 1) throw Error("diagonal relation needs at least one tuple");
    std::vector<std::string> la(n), lb(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        la[i] = "a" + std::to_string(i);
        lb[i] = "b" + std::to_string(i);
    }
    std::vector<AttributeSchema::Attribute> attrs = {
        {.name = "A", .domain_size = n, .labels = std::move(la), .declared = false},
        {.name = "B", .domain_size = n, .labels = std::move(lb), .declared = false},
    };
    auto schema = std::make_shared<AttributeSchema>(std::move(attrs));
    std::vector<Tuple> rows;
    rows.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        rows.push_back({static_cast<Value>(i), static_cast<Value>(i)});
    return Relation(std::move(schema), std::move(rows));
}

}  // namespace ajd
