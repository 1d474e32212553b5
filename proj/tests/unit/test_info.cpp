#include <doctest.h>

#include <cmath>

#include "ajd/csv.hpp"
#include "ajd/info.hpp"

using namespace ajd;

TEST_CASE("entropy: uniform, diagonal family, skewed marginal") {
    auto u = make_diagonal_relation(4);
    auto pu = empirical(u);
    CHECK(info::entropy(pu, u.schema().full_mask()) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(info::entropy(pu, 0) == 0.0);  // H(empty set)

    // diagonal of size N: H(A) = H(B) = H(AB) = log N
    auto d = make_diagonal_relation(16);
    auto pd = empirical(d);
    CHECK(info::entropy(pd, AttrMask{1}) == doctest::Approx(std::log(16.0)).epsilon(1e-15));
    CHECK(info::entropy(pd, AttrMask{2}) == doctest::Approx(std::log(16.0)).epsilon(1e-15));
    CHECK(info::entropy(pd, AttrMask{3}) == doctest::Approx(std::log(16.0)).epsilon(1e-15));

    // marginal (2/3, 1/3): frozen independent evaluation of the summation
    auto r = load_csv_string("A,B\n0,0\n0,1\n1,0\n");
    CHECK(info::entropy(empirical(r), AttrMask{1}) ==
          doctest::Approx(0.6365141682948128).epsilon(1e-14));
}

TEST_CASE("conditional mutual information") {
    // product distribution: I(A;B) = 0
    auto prod = load_csv_string("A,B\n0,0\n0,1\n1,0\n1,1\n");
    CHECK(info::cond_mutual_info(empirical(prod), AttrMask{1}, AttrMask{2}, 0) == 0.0);

    // diagonal: I(A;B) = log N
    auto d = make_diagonal_relation(8);
    CHECK(info::cond_mutual_info(empirical(d), AttrMask{1}, AttrMask{2}, 0) ==
          doctest::Approx(std::log(8.0)).epsilon(1e-14));

    // three attributes: equals the four-entropy combination recomputed here
    auto r = load_csv_string("A,B,C\n0,0,0\n0,1,0\n1,0,1\n1,1,1\n0,0,1\n");
    auto p = empirical(r);
    AttrMask a{1}, b{2}, c{4};
    double expect = info::entropy(p, b | c) + info::entropy(p, a | c) -
                    info::entropy(p, a | b | c) - info::entropy(p, c);
    CHECK(info::cond_mutual_info(p, a, b, c) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("kl divergence") {
    auto r1 = load_csv_string("X\n0\n1\n");
    auto p = empirical(r1).to_distribution();
    CHECK(info::kl_divergence(p, p) == 0.0);

    auto r2 = load_csv_string("X\n0\n0\n0\n1\n");
    auto q = empirical(r2).to_distribution();
    // (1/2)log(2/3) + (1/2)log 2, frozen two-term evaluation
    CHECK(info::kl_divergence(p, q) == doctest::Approx(0.14384103622589046).epsilon(1e-14));

    // mismatched domains are a schema error, not an infinity
    auto r3 = load_csv_string("X\n0\n2\n");
    auto wide = empirical(r3).to_distribution();
    CHECK_THROWS_AS(info::kl_divergence(wide, p), Error);

    CsvOptions opt;
    opt.domains["X"] = 3;
    auto p3 = empirical(load_csv_string("X\n0\n2\n", opt)).to_distribution();
    auto q3 = empirical(load_csv_string("X\n0\n1\n", opt)).to_distribution();
    CHECK(std::isinf(info::kl_divergence(p3, q3)));
}

TEST_CASE("functional entropy") {
    double w2[] = {0.5, 0.5};
    double constant[] = {3.0, 3.0};
    CHECK(info::functional_entropy(constant, w2) == 0.0);

    double two_point[] = {0.0, 2.0};
    CHECK(info::functional_entropy(two_point, w2) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));

    double negative[] = {-1.0, 2.0};
    CHECK_THROWS_AS(info::functional_entropy(negative, w2), Error);

    // Jensen: Ent >= 0 on a few spot samples
    double vals[] = {0.1, 2.5, 7.0};
    double w3[] = {0.2, 0.3, 0.5};
    CHECK(info::functional_entropy(vals, w3) >= 0.0);
}

TEST_CASE("base conversion is an exact division") {
    double nats = 1.2345678;
    CHECK(in_base(nats, LogBase::Two) == nats / M_LN2);
    CHECK(in_base(nats, LogBase::E) == nats);
    CHECK(parse_log_base("e") == LogBase::E);
    CHECK(parse_log_base("2") == LogBase::Two);
    CHECK_THROWS_AS(parse_log_base("10"), Error);
}
