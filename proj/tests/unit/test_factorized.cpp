#include <doctest.h>

#include <cmath>

#include "ajd/csv.hpp"
#include "ajd/factorized.hpp"
#include "ajd/generators.hpp"
#include "ajd/oracle.hpp"

using namespace ajd;

TEST_CASE("two-bag factorization is P(ab)P(bc)/P(b)") {
    auto r = load_csv_string("A,B,C\n0,0,0\n0,0,1\n1,1,0\n0,1,0\n");
    auto s = r.schema_ptr();
    AttrMask a = 1, b = 2, c = 4;
    JoinTree t(s, {{0, a | b}, {1, b | c}}, {{0, 1}});
    auto p = empirical(r);
    auto pt = factorized_distribution(t, p);

    auto counts_ab = p.marginal_counts(a | b);
    auto counts_bc = p.marginal_counts(b | c);
    auto counts_b = p.marginal_counts(b);
    auto count_of = [](const std::vector<std::pair<Tuple, std::uint64_t>> &v, const Tuple &key) {
        for (auto &[t2, c2] : v)
            if (t2 == key) return c2;
        return std::uint64_t{0};
    };
    const double n = 4.0;
    for (Value va = 0; va < 2; ++va)
        for (Value vb = 0; vb < 2; ++vb)
            for (Value vc = 0; vc < 2; ++vc) {
                double pab = static_cast<double>(count_of(counts_ab, {va, vb})) / n;
                double pbc = static_cast<double>(count_of(counts_bc, {vb, vc})) / n;
                double pb = static_cast<double>(count_of(counts_b, {vb})) / n;
                double expect = pb > 0 ? pab * pbc / pb : 0.0;
                CHECK(pt.mass({va, vb, vc}) == doctest::Approx(expect).epsilon(1e-12));
            }
}

TEST_CASE("P already models T implies P_T == P pointwise") {
    auto prod = load_csv_string("A,B\n0,0\n0,1\n1,0\n1,1\n");
    auto s = prod.schema_ptr();
    JoinTree t(s, {{0, AttrMask{1}}, {1, AttrMask{2}}}, {{0, 1}});
    auto p = empirical(prod);
    auto pt = factorized_distribution(t, p);
    for (std::size_t i = 0; i < prod.distinct_count(); ++i)
        CHECK(pt.mass(prod.row_tuple(i)) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(models(pt.materialize(), t, 1e-9));
    CHECK(kl_to_factorized(p, pt) <= 1e-12);
}

TEST_CASE("random P over 2x2x2: marginals preserved within 1e-12") {
    gen::SplitMix64 rng(99, 1);
    for (int trial = 0; trial < 25; ++trial) {
        auto schema = gen::make_schema({2, 2, 2});
        auto rel = gen::random_count_relation(rng, schema, 4);
        auto p = empirical(rel);
        auto tree = gen::random_join_tree(rng, schema);
        auto pt = factorized_distribution(tree, p);
        auto dist = pt.materialize();
        CHECK(std::fabs(pt.total_mass() - 1.0) <= 1e-12);
        for (const auto &node : tree.nodes()) {
            auto got = dist.marginal(node.bag);
            auto want = p.marginal_counts(node.bag);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].first == want[i].first);
                CHECK(got[i].second ==
                      doctest::Approx(static_cast<double>(want[i].second) / p.N())
                          .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("separator with zero probability carries zero mass") {
    CsvOptions opt;
    opt.domains = {{"A", 2}, {"B", 2}, {"C", 2}};
    auto r = load_csv_string("A,B,C\n0,0,0\n1,0,1\n", opt);
    auto s = r.schema_ptr();
    JoinTree t(s, {{0, AttrMask{3}}, {1, AttrMask{6}}}, {{0, 1}});
    auto pt = factorized_distribution(t, empirical(r));
    CHECK(pt.mass({0, 1, 0}) == 0.0);  // B=1 never occurs
    CHECK(pt.log_mass({0, 1, 0}) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("materialized P_T equals the rational oracle enumeration") {
    gen::SplitMix64 rng(512, 3);
    for (int trial = 0; trial < 15; ++trial) {
        auto schema = gen::make_schema({2, 3, 2});
        auto rel = gen::random_count_relation(rng, schema, 3);
        auto p = empirical(rel);
        auto tree = gen::random_join_tree(rng, schema);
        auto dist = factorized_distribution(tree, p).materialize();

        auto dense = oracle::dense_from_empirical(p);
        auto dense_pt = oracle::oracle_enumerate_pt(tree, dense);
        CHECK(dense_pt.total() == 1);

        std::size_t idx = 0;
        for (Value a = 0; a < 2; ++a)
            for (Value b = 0; b < 3; ++b)
                for (Value c = 0; c < 2; ++c) {
                    double expect = dense_pt.mass[idx++].convert_to<double>();
                    CHECK(dist.mass({a, b, c}) == doctest::Approx(expect).epsilon(1e-12));
                }
    }
}

TEST_CASE("J of the materialized factorization itself is zero") {
    gen::SplitMix64 rng(606, 2);
    for (int trial = 0; trial < 10; ++trial) {
        auto schema = gen::make_schema({2, 2, 3});
        auto rel = gen::random_count_relation(rng, schema, 3);
        auto tree = gen::random_join_tree(rng, schema);
        auto dist = factorized_distribution(tree, empirical(rel)).materialize();
        CHECK(j_measure(tree, dist) <= 1e-12);
    }
}
