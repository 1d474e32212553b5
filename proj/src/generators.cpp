#include "ajd/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace ajd {
namespace gen {

SchemaPtr make_schema(const std::vector<std::uint64_t> &dims) {
    std::vector<AttributeSchema::Attribute> attrs(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
        attrs[i].name = "X" + std::to_string(i);
        attrs[i].declared = true;
        attrs[i].domain_size = dims[i];
    }
    return std::make_shared<AttributeSchema>(std::move(attrs));
}

JoinTree random_join_tree(SplitMix64 &rng, const SchemaPtr &schema, std::size_t max_nodes) {
    const std::size_t n = schema->arity();
    std::vector<std::size_t> fresh(n);
    std::iota(fresh.begin(), fresh.end(), 0);
    for (std::size_t i = n; i-- > 1;) std::swap(fresh[i], fresh[rng.below(i + 1)]);

    const std::size_t m = 1 + rng.below(std::min(max_nodes, std::max<std::size_t>(n, 1)));
    std::vector<JoinTree::Node> nodes;
    std::vector<std::pair<int, int>> edges;
    std::size_t cursor = 0;

    auto take_fresh = [&](std::size_t want) {
        AttrMask got = 0;
        while (want-- > 0 && cursor < n) got |= AttrMask{1} << fresh[cursor++];
        return got;
    };

    for (std::size_t i = 0; i < m; ++i) {
        AttrMask bag = 0;
        if (i == 0) {
            bag = take_fresh(1 + rng.below(3));
        } else {
            std::size_t parent = rng.below(i);
            AttrMask pbag = nodes[parent].bag;
            for (std::size_t a : mask_indices(pbag))
                if (rng.below(2) == 0) bag |= AttrMask{1} << a;
            bag |= take_fresh(rng.below(3));
            if (bag == 0) bag |= AttrMask{1} << mask_indices(pbag)[rng.below(mask_size(pbag))];
            edges.emplace_back(static_cast<int>(parent), static_cast<int>(i));
        }
        nodes.push_back({static_cast<int>(i), bag});
    }
    // Park any leftover attributes in a single random node each; a singleton
    // occurrence cannot break the running intersection.
    while (cursor < n) {
        nodes[rng.below(m)].bag |= AttrMask{1} << fresh[cursor++];
    }
    JoinTree tree(schema, std::move(nodes), std::move(edges));
    require_valid(tree);
    return tree;
}

namespace {

Tuple random_tuple(SplitMix64 &rng, const AttributeSchema &schema) {
    Tuple t(schema.arity());
    for (std::size_t i = 0; i < schema.arity(); ++i)
        t[i] = static_cast<Value>(rng.below(schema.at(i).domain_size));
    return t;
}

u128 domain_product(const AttributeSchema &schema) {
    u128 prod = 1;
    for (std::size_t i = 0; i < schema.arity(); ++i)
        if (mul_overflows(prod, u128{schema.at(i).domain_size}, prod))
            throw Error("domain product overflows");
    return prod;
}

}  // namespace

Relation random_relation_with_duplicates(SplitMix64 &rng, const SchemaPtr &schema,
                                         std::uint64_t n) {
    std::vector<Tuple> rows;
    rows.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) rows.push_back(random_tuple(rng, *schema));
    return Relation(schema, std::move(rows));
}

Relation random_set_relation(SplitMix64 &rng, const SchemaPtr &schema, std::uint64_t n) {
    u128 space = domain_product(*schema);
    if (u128{n} > space) n = static_cast<std::uint64_t>(space);  // clamp to the space
    std::unordered_set<Tuple, TupleHash> seen;
    std::vector<Tuple> rows;
    while (rows.size() < n) {
        Tuple t = random_tuple(rng, *schema);
        if (seen.insert(t).second) rows.push_back(std::move(t));
    }
    return Relation(schema, std::move(rows));
}

Relation random_count_relation(SplitMix64 &rng, const SchemaPtr &schema,
                               std::uint64_t max_count) {
    u128 cells = domain_product(*schema);
    if (cells > 10000) throw Error("count distribution domain too large");
    std::vector<std::pair<Tuple, std::uint64_t>> counted;
    Tuple t(schema->arity(), 0);
    bool done = false;
    while (!done) {
        std::uint64_t c = rng.below(max_count + 1);
        if (c > 0) counted.emplace_back(t, c);
        done = true;
        for (std::size_t i = schema->arity(); i-- > 0;) {
            if (++t[i] < schema->at(i).domain_size) {
                done = false;
                break;
            }
            t[i] = 0;
        }
    }
    if (counted.empty())
        counted.emplace_back(random_tuple(rng, *schema), 1 + rng.below(max_count));
    return Relation::from_counted(schema, std::move(counted));
}

Relation lossless_closure(SplitMix64 &rng, const SchemaPtr &schema, const JoinTree &tree,
                          std::uint64_t base_rows, std::size_t cap) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Relation base = random_set_relation(rng, schema, base_rows);
        try {
            return acyclic_join(base, tree, cap);
        } catch (const Error &) {
            // closure too large; draw a fresh base
        }
    }
    throw Error("could not build a lossless closure within the cap");
}

std::optional<std::size_t> removable_tuple(const Relation &r, const JoinTree &tree) {
    if (r.distinct_count() < 2) return std::nullopt;
    std::vector<std::vector<std::size_t>> bag_idx;
    for (const auto &n : tree.nodes()) bag_idx.push_back(mask_indices(n.bag));
    std::vector<std::unordered_map<Tuple, std::uint32_t, TupleHash>> counts(bag_idx.size());
    for (std::size_t i = 0; i < r.distinct_count(); ++i) {
        auto row = r.row(i);
        for (std::size_t b = 0; b < bag_idx.size(); ++b) {
            Tuple key(bag_idx[b].size());
            for (std::size_t j = 0; j < key.size(); ++j) key[j] = row[bag_idx[b][j]];
            ++counts[b][key];
        }
    }
    for (std::size_t i = 0; i < r.distinct_count(); ++i) {
        auto row = r.row(i);
        bool ok = true;
        for (std::size_t b = 0; b < bag_idx.size() && ok; ++b) {
            Tuple key(bag_idx[b].size());
            for (std::size_t j = 0; j < key.size(); ++j) key[j] = row[bag_idx[b][j]];
            ok = counts[b][key] >= 2;
        }
        if (ok) return i;
    }
    return std::nullopt;
}

Relation without_row(const Relation &r, std::size_t row) {
    std::vector<std::pair<Tuple, std::uint64_t>> kept;
    for (std::size_t i = 0; i < r.distinct_count(); ++i)
        if (i != row) kept.emplace_back(r.row_tuple(i), r.multiplicity(i));
    return Relation::from_counted(r.schema_ptr(), std::move(kept));
}

Distribution perturbed_tree_distribution(SplitMix64 &rng, const JoinTree &tree,
                                         const EmpiricalDistribution &p, double noise) {
    if (tree.universe() != p.schema().full_mask())
        throw Error("perturbed tree distribution needs a tree spanning the full schema");
    const auto &schema = p.schema();
    if (domain_product(schema) > 10000) throw Error("product domain too large to enumerate");

    auto order = dfs_order(tree);
    const std::size_t m = order.size();
    std::vector<std::vector<std::size_t>> bag_idx(m), sep_idx(m), ext_idx(m);
    std::vector<std::unordered_map<Tuple, std::uint64_t, TupleHash>> bag_counts(m),
        sep_counts(m);
    auto pc = factorized_distribution(tree, p);
    for (std::size_t i = 0; i < m; ++i) {
        bag_idx[i] = mask_indices(order.bags[i]);
        sep_idx[i] = mask_indices(order.seps[i]);
        ext_idx[i] = mask_indices(order.bags[i] & ~order.seps[i]);
        bag_counts[i] = pc.bag_counts(i);
        sep_counts[i] = pc.sep_counts(i);
    }

    // Per node, a perturbed conditional q_i(extension | separator): smoothed
    // toward uniform so Q has full support, then jittered and renormalized.
    // Q(x) = q_1(bag_1) Π q_i(ext_i | sep_i) models the tree by construction.
    struct CondTable {
        std::unordered_map<Tuple, double, TupleHash> value;  // key over bag
    };
    std::vector<CondTable> cond(m);

    auto enumerate = [&](const std::vector<std::size_t> &idx, auto &&fn) {
        Tuple t(idx.size(), 0);
        bool done = idx.empty();
        if (idx.empty()) {
            fn(t);
            return;
        }
        while (!done) {
            fn(t);
            done = true;
            for (std::size_t i = idx.size(); i-- > 0;) {
                if (++t[i] < schema.at(idx[i]).domain_size) {
                    done = false;
                    break;
                }
                t[i] = 0;
            }
        }
    };

    const double n = static_cast<double>(p.N());
    for (std::size_t i = 0; i < m; ++i) {
        // group extensions under each separator assignment
        std::unordered_map<Tuple, std::vector<std::pair<Tuple, double>>, TupleHash> groups;
        enumerate(bag_idx[i], [&](const Tuple &bt) {
            Tuple sep_key, ext_key;
            for (std::size_t j = 0; j < bag_idx[i].size(); ++j) {
                std::size_t a = bag_idx[i][j];
                bool in_sep =
                    std::binary_search(sep_idx[i].begin(), sep_idx[i].end(), a);
                (in_sep ? sep_key : ext_key).push_back(bt[j]);
            }
            double base;
            auto bit = bag_counts[i].find(bt);
            double bag_p = bit == bag_counts[i].end() ? 0.0 : static_cast<double>(bit->second) / n;
            if (i == 0) {
                base = bag_p;
            } else {
                auto st = sep_counts[i].find(sep_key);
                double sep_p =
                    st == sep_counts[i].end() ? 0.0 : static_cast<double>(st->second) / n;
                base = sep_p > 0.0 ? bag_p / sep_p : 0.0;
            }
            groups[sep_key].emplace_back(bt, base);
        });
        for (auto &[sep_key, exts] : groups) {
            const double uniform = 1.0 / static_cast<double>(exts.size());
            double total = 0.0;
            std::vector<double> vals(exts.size());
            for (std::size_t e = 0; e < exts.size(); ++e) {
                double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
                vals[e] = (0.5 * exts[e].second + 0.5 * uniform) *
                          std::exp(noise * (2.0 * u - 1.0));
                total += vals[e];
            }
            for (std::size_t e = 0; e < exts.size(); ++e)
                cond[i].value[exts[e].first] = vals[e] / total;
        }
    }

    // Multiply the conditionals over every cell of the full product domain.
    std::vector<std::size_t> all_idx(schema.arity());
    std::iota(all_idx.begin(), all_idx.end(), 0);
    std::vector<std::pair<Tuple, double>> mass;
    enumerate(all_idx, [&](const Tuple &cell) {
        double q = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            Tuple key(bag_idx[i].size());
            for (std::size_t j = 0; j < key.size(); ++j) key[j] = cell[bag_idx[i][j]];
            q *= cond[i].value.at(key);
        }
        mass.emplace_back(cell, q);
    });
    return Distribution(p.schema_ptr(), std::move(mass), 1e-6);
}

}  // namespace gen
}  // namespace ajd
