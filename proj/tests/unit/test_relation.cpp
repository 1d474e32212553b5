#include <doctest.h>

#include "ajd/csv.hpp"
#include "ajd/distribution.hpp"
#include "ajd/info.hpp"
#include "ajd/relation.hpp"

using namespace ajd;

namespace {

Relation tiny_ab(std::initializer_list<std::pair<int, int>> rows) {
    std::string csv = "A,B\n";
    for (auto [a, b] : rows) csv += std::to_string(a) + "," + std::to_string(b) + "\n";
    return load_csv_string(csv);
}

}  // namespace

TEST_CASE("load_csv basic shape and multiset semantics") {
    auto r = load_csv_string("A,B\n0,0\n1,1\n");
    CHECK(r.size() == 2);
    CHECK(r.distinct_count() == 2);
    CHECK(r.schema().arity() == 2);
    CHECK(r.schema().at(0).name == "A");

    auto dup = load_csv_string("A,B\n0,0\n0,0\n");
    CHECK(dup.size() == 2);
    CHECK(dup.distinct_count() == 1);
    CHECK(dup.multiplicity(0) == 2);
}

TEST_CASE("load_csv errors") {
    CHECK_THROWS_AS(load_csv_string(""), Error);
    CHECK_THROWS_AS(load_csv_string("A,B\n"), Error);           // header only
    CHECK_THROWS_AS(load_csv_string("A,B\n1,2\n3\n"), Error);   // ragged
    CHECK_THROWS_WITH_AS(load_csv_string("A,B\n1,2\n3\n"), doctest::Contains("line 3"), Error);

    CsvOptions opt;
    opt.domains["A"] = 4;
    CHECK_THROWS_AS(load_csv_string("A\n7\n", opt), Error);  // outside {0..3}
    CHECK_NOTHROW(load_csv_string("A\n3\n", opt));
}

TEST_CASE("load_csv quoting, headerless input and delimiters") {
    auto r = load_csv_string("A,B\n\"x,y\",\"he said \"\"hi\"\"\"\n");
    CHECK(r.decoded_rows()[0][0] == "x,y");
    CHECK(r.decoded_rows()[0][1] == "he said \"hi\"");

    CsvOptions opt;
    opt.header = false;
    auto h = load_csv_string("1,2\n", opt);
    CHECK(h.schema().at(0).name == "col0");

    opt.delimiter = ';';
    auto s = load_csv_string("1;2\n", opt);
    CHECK(s.schema().arity() == 2);
}

TEST_CASE("project distinct semantics with summed multiplicities") {
    auto r = tiny_ab({{0, 0}, {0, 1}, {1, 0}});
    auto pa = r.project(AttrMask{1});
    REQUIRE(pa.distinct_count() == 2);
    CHECK(pa.multiplicity(0) == 2);  // value 0 collapsed two rows
    CHECK(pa.multiplicity(1) == 1);
    CHECK(pa.size() == 3);

    // identity projection
    auto all = r.project(r.schema().full_mask());
    CHECK(all.distinct_count() == r.distinct_count());

    CHECK_THROWS_AS(r.project(std::vector<std::string>{"Z"}), Error);
}

TEST_CASE("natural join nested-loop semantics") {
    // diagonal N=3 over disjoint domains: cross product has N^2 tuples
    auto diag = make_diagonal_relation(3);
    auto joined = natural_join(diag.project(AttrMask{1}), diag.project(AttrMask{2}));
    CHECK(joined.distinct_count() == 9);

    // join with an empty relation
    auto r1 = tiny_ab({{0, 0}});
    auto empty = r1.select_eq("A", "1");
    CHECK(natural_join(r1, empty).distinct_count() == 0);

    // match on B=0 only
    auto lhs = load_csv_string("A,B\n0,0\n");
    auto rhs = load_csv_string("B,C\n0,5\n1,5\n");
    auto j = natural_join(lhs, rhs);
    REQUIRE(j.distinct_count() == 1);
    CHECK(j.decoded_rows()[0] == std::vector<std::string>{"0", "0", "5"});

    // conflicting declared domains
    CsvOptions o1, o2;
    o1.domains["B"] = 2;
    o2.domains["B"] = 3;
    auto d1 = load_csv_string("A,B\n0,0\n", o1);
    auto d2 = load_csv_string("B,C\n0,1\n", o2);
    CHECK_THROWS_AS(natural_join(d1, d2), Error);
}

TEST_CASE("select_eq") {
    auto r = load_csv_string("C\n1\n1\n2\n");
    CHECK(r.select_eq("C", "1").size() == 2);
    CHECK(r.select_eq("C", "9").size() == 0);  // absent value -> empty
    auto constant = load_csv_string("C\n5\n5\n");
    auto sel = constant.select_eq("C", "5");
    CHECK(sel.size() == constant.size());
    CHECK(sel.distinct_count() == constant.distinct_count());
}

TEST_CASE("empirical distribution masses") {
    auto uniform = make_diagonal_relation(4);
    auto p = empirical(uniform);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(p.mass(uniform.row_tuple(i)) == doctest::Approx(0.25).epsilon(1e-15));

    auto skewed = load_csv_string("A\nx\nx\ny\nz\n");
    auto q = empirical(skewed);
    CHECK(q.N() == 4);
    auto counts = q.marginal_counts(AttrMask{1});
    REQUIRE(counts.size() == 3);
    CHECK(counts[0].second == 2);  // x interned first

    double total = 0;
    for (auto &[t, c] : counts) total += static_cast<double>(c) / 4.0;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

    auto none = skewed.select_eq("A", "w");
    CHECK_THROWS_AS(empirical(none), Error);
}

TEST_CASE("duplicate-free empirical entropy is exactly log N") {
    auto r = make_diagonal_relation(7);
    CHECK(info::entropy(empirical(r), r.schema().full_mask()) == std::log(7.0));
}

TEST_CASE("natural join with mixed declared and inferred domains") {
    CsvOptions declared;
    declared.domains["B"] = 4;
    auto lhs = load_csv_string("A,B\nx,2\ny,3\n", declared);   // B declared size 4
    auto rhs = load_csv_string("B,C\n2,u\n0,v\n");             // B inferred {2,0}
    auto j = natural_join(lhs, rhs);
    REQUIRE(j.distinct_count() == 1);
    CHECK(j.decoded_rows()[0] == std::vector<std::string>{"x", "2", "u"});

    // inferred value outside the declared range is a conflict
    auto bad = load_csv_string("B,C\n7,u\n");
    CHECK_THROWS_AS(natural_join(lhs, bad), Error);
}

TEST_CASE("csv without trailing newline and with CRLF line endings") {
    auto r = load_csv_string("A,B\n0,0\n1,1");  // no trailing newline
    CHECK(r.size() == 2);
    auto crlf = load_csv_string("A,B\r\n0,0\r\n1,1\r\n");
    CHECK(crlf.size() == 2);
    CHECK(crlf.schema().at(1).name == "B");
    CHECK(crlf.decoded_rows()[0] == std::vector<std::string>{"0", "0"});
}

TEST_CASE("blank lines between csv records are skipped, not treated as EOF") {
    auto r = load_csv_string("A,B\n0,0\n\n1,1\n\n");
    CHECK(r.size() == 2);
    // quoted empty field is a real one-column record, not a blank line
    auto q = load_csv_string("A\n\"\"\nx\n");
    CHECK(q.size() == 2);
    CHECK(q.decoded_rows()[0][0] == "");
}

TEST_CASE("membership lookup on sorted rows") {
    auto d = make_diagonal_relation(5);
    CHECK(d.contains(Tuple{2, 2}));
    CHECK_FALSE(d.contains(Tuple{2, 3}));
    CHECK_FALSE(d.contains(Tuple{2}));
}
