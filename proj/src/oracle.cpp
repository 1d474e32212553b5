#include "ajd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace ajd {
namespace oracle {

std::vector<NamedTuple> decoded_set(const Relation &r) {
    std::set<NamedTuple> seen;
    for (std::size_t i = 0; i < r.distinct_count(); ++i) {
        NamedTuple t;
        for (std::size_t a = 0; a < r.arity(); ++a)
            t[r.schema().at(a).name] = r.schema().label(a, r.row(i)[a]);
        seen.insert(std::move(t));
    }
    return {seen.begin(), seen.end()};
}

namespace {

bool compatible(const NamedTuple &a, const NamedTuple &b) {
    for (const auto &[k, v] : a) {
        auto it = b.find(k);
        if (it != b.end() && it->second != v) return false;
    }
    return true;
}

NamedTuple merged(const NamedTuple &a, const NamedTuple &b) {
    NamedTuple out = a;
    out.insert(b.begin(), b.end());
    return out;
}

}  // namespace

std::vector<NamedTuple> oracle_join(const std::vector<Relation> &relations, std::size_t cap) {
    if (relations.empty()) throw Error("oracle join of an empty relation list");
    std::set<NamedTuple> acc;
    for (auto &t : decoded_set(relations[0])) acc.insert(t);
    for (std::size_t i = 1; i < relations.size(); ++i) {
        std::set<NamedTuple> next;
        auto rhs = decoded_set(relations[i]);
        for (const auto &l : acc)
            for (const auto &r : rhs)
                if (compatible(l, r)) {
                    next.insert(merged(l, r));
                    if (next.size() > cap)
                        throw Error("oracle join exceeds guard of " + std::to_string(cap));
                }
        acc = std::move(next);
    }
    return {acc.begin(), acc.end()};
}

std::size_t DenseDistribution::cell_count() const {
    std::size_t n = 1;
    for (const auto &d : domains) n *= d.size();
    return n;
}

std::size_t DenseDistribution::index_of(const std::vector<std::size_t> &coords) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) idx = idx * domains[i].size() + coords[i];
    return idx;
}

Rational DenseDistribution::total() const {
    Rational t = 0;
    for (const auto &m : mass) t += m;
    return t;
}

DenseDistribution dense_from_empirical(const EmpiricalDistribution &p) {
    const auto &schema = p.schema();
    DenseDistribution d;
    for (std::size_t i = 0; i < schema.arity(); ++i) {
        d.attrs.push_back(schema.at(i).name);
        std::vector<std::string> labels;
        for (std::uint64_t v = 0; v < schema.at(i).domain_size; ++v)
            labels.push_back(schema.label(i, static_cast<Value>(v)));
        d.domains.push_back(std::move(labels));
    }
    if (d.cell_count() > 10000) throw Error("dense oracle table exceeds 10000 cells");
    d.mass.assign(d.cell_count(), Rational(0));
    const auto &rel = p.relation();
    for (std::size_t r = 0; r < rel.distinct_count(); ++r) {
        std::vector<std::size_t> coords(rel.arity());
        for (std::size_t i = 0; i < rel.arity(); ++i) coords[i] = rel.row(r)[i];
        d.mass[d.index_of(coords)] =
            Rational(rel.multiplicity(r), static_cast<std::uint64_t>(rel.size()));
    }
    return d;
}

namespace {

std::vector<std::size_t> attr_positions(const DenseDistribution &p,
                                        const std::vector<std::string> &attrs) {
    std::vector<std::size_t> pos;
    for (const auto &name : attrs) {
        auto it = std::find(p.attrs.begin(), p.attrs.end(), name);
        if (it == p.attrs.end()) throw Error("oracle: unknown attribute '" + name + "'");
        pos.push_back(static_cast<std::size_t>(it - p.attrs.begin()));
    }
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    return pos;
}

// walk all cells, calling fn(coords, mass)
template <class Fn>
void for_each_cell(const DenseDistribution &p, Fn &&fn) {
    std::vector<std::size_t> coords(p.attrs.size(), 0);
    for (std::size_t idx = 0; idx < p.cell_count(); ++idx) {
        fn(coords, p.mass[idx]);
        for (std::size_t i = p.attrs.size(); i-- > 0;) {
            if (++coords[i] < p.domains[i].size()) break;
            coords[i] = 0;
        }
    }
}

}  // namespace

std::map<std::vector<std::string>, Rational> oracle_marginal(
    const DenseDistribution &p, const std::vector<std::string> &attrs) {
    auto pos = attr_positions(p, attrs);
    std::map<std::vector<std::string>, Rational> out;
    for_each_cell(p, [&](const std::vector<std::size_t> &coords, const Rational &m) {
        std::vector<std::string> key;
        for (std::size_t i : pos) key.push_back(p.domains[i][coords[i]]);
        out[key] += m;
    });
    return out;
}

double oracle_entropy(const DenseDistribution &p, const std::vector<std::string> &attrs) {
    auto marg = oracle_marginal(p, attrs);
    long double h = 0.0L;
    for (const auto &[key, m] : marg) {
        if (m == 0) continue;
        long double x = m.convert_to<long double>();
        h -= x * std::log(x);
    }
    return static_cast<double>(h);
}

DenseDistribution oracle_enumerate_pt(const JoinTree &tree, const DenseDistribution &p) {
    if (p.cell_count() > 10000) throw Error("dense oracle table exceeds 10000 cells");

    // Exact rational marginals per bag and per edge intersection.
    auto names_of = [&](AttrMask m) {
        std::vector<std::string> names;
        for (std::size_t i : mask_indices(m)) names.push_back(tree.schema().at(i).name);
        return names;
    };
    struct Factor {
        std::vector<std::string> attrs;
        std::map<std::vector<std::string>, Rational> table;
    };
    std::vector<Factor> bag_factors, edge_factors;
    for (const auto &n : tree.nodes()) {
        auto names = names_of(n.bag);
        bag_factors.push_back({names, oracle_marginal(p, names)});
    }
    for (auto [a, b] : tree.edges()) {
        auto names = names_of(tree.bag_of(a) & tree.bag_of(b));
        edge_factors.push_back({names, oracle_marginal(p, names)});
    }

    DenseDistribution out;
    out.attrs = p.attrs;
    out.domains = p.domains;
    out.mass.assign(p.cell_count(), Rational(0));

    auto value_of = [&](const std::vector<std::size_t> &coords, const std::string &attr) {
        for (std::size_t i = 0; i < p.attrs.size(); ++i)
            if (p.attrs[i] == attr) return p.domains[i][coords[i]];
        throw Error("oracle: unknown attribute '" + attr + "'");
    };

    std::size_t idx = 0;
    for_each_cell(p, [&](const std::vector<std::size_t> &coords, const Rational &) {
        Rational numer = 1;
        Rational denom = 1;
        bool zero = false;
        for (const auto &f : bag_factors) {
            std::vector<std::string> key;
            for (const auto &a : f.attrs) key.push_back(value_of(coords, a));
            auto it = f.table.find(key);
            if (it == f.table.end() || it->second == 0) {
                zero = true;
                break;
            }
            numer *= it->second;
        }
        if (!zero)
            for (const auto &f : edge_factors) {
                std::vector<std::string> key;
                for (const auto &a : f.attrs) key.push_back(value_of(coords, a));
                auto it = f.table.find(key);
                if (it == f.table.end() || it->second == 0) {
                    zero = true;  // separator vanishes; the bags above did too
                    break;
                }
                denom *= it->second;
            }
        out.mass[idx++] = zero ? Rational(0) : numer / denom;
    });
    return out;
}

double oracle_kl(const DenseDistribution &p, const DenseDistribution &q) {
    if (p.attrs != q.attrs || p.domains != q.domains)
        throw Error("oracle KL requires identical dense domains");
    long double d = 0.0L;
    for (std::size_t i = 0; i < p.mass.size(); ++i) {
        if (p.mass[i] == 0) continue;
        if (q.mass[i] == 0) return std::numeric_limits<double>::infinity();
        long double pm = p.mass[i].convert_to<long double>();
        long double qm = q.mass[i].convert_to<long double>();
        d += pm * std::log(pm / qm);
    }
    return static_cast<double>(d);
}

}  // namespace oracle
}  // namespace ajd
