// Acceptance suite: every release gate in one binary. Each criterion prints a
// single PASS/FAIL line with its runtime, enforces its wall-clock budget, and
// the process exits nonzero if any criterion fails.

#include <sys/resource.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "ajd/cli.hpp"
#include "ajd/csv.hpp"
#include "ajd/factorized.hpp"
#include "ajd/generators.hpp"
#include "ajd/oracle.hpp"
#include "ajd/randmodel.hpp"
#include "ajd/report.hpp"

using namespace ajd;

namespace {

struct Failure {
    std::string message;
};

void require(bool ok, const std::string &message) {
    if (!ok) throw Failure{message};
}

// --- 1: tightness family -----------------------------------------------------

void criterion_tightness() {
    for (std::uint64_t n : {2ull, 16ull, 64ull, 1024ull}) {
        Relation r = make_diagonal_relation(n);
        JoinTree tree(r.schema_ptr(), {{0, AttrMask{1}}, {1, AttrMask{2}}}, {{0, 1}});
        auto p = empirical(r);
        double j = j_measure(tree, p);
        double rho = spurious_ratio(r, tree);
        require(rho == static_cast<double>(n - 1),
                "rho != N-1 exactly at N=" + std::to_string(n));
        double gap = std::log1p(rho) - j;
        require(std::fabs(gap) <= 1e-9,
                "|J - log(1+rho)| = " + fmt_double(std::fabs(gap)) + " at N=" + std::to_string(n));
    }
}

// --- 2: losslessness characterization ----------------------------------------

void criterion_lossless_characterization() {
    gen::SplitMix64 rng(20240601, 0);
    int built = 0;
    while (built < 100) {
        std::size_t arity = 3 + rng.below(3);  // 3..5 attributes
        std::vector<std::uint64_t> dims(arity);
        for (auto &d : dims) d = 2 + rng.below(4);  // domains <= 5
        auto schema = gen::make_schema(dims);
        auto tree = gen::random_join_tree(rng, schema);
        if (tree.node_count() < 2) continue;
        Relation lossless = gen::lossless_closure(rng, schema, tree, 2 + rng.below(8));
        auto victim = gen::removable_tuple(lossless, tree);
        if (!victim) continue;  // need a tuple the join will regenerate
        ++built;

        double j = j_measure(tree, empirical(lossless));
        double rho = spurious_ratio(lossless, tree);
        require(j <= 1e-9, "lossless closure has J = " + fmt_double(j));
        require(rho == 0.0, "lossless closure has rho = " + fmt_double(rho));

        Relation perturbed = gen::without_row(lossless, *victim);
        double j2 = j_measure(tree, empirical(perturbed));
        double rho2 = spurious_ratio(perturbed, tree);
        require(j2 > 1e-9, "deleting a tuple left J at " + fmt_double(j2));
        require(rho2 > 0.0, "deleted tuple was not regenerated by the join");
    }
}

// --- 3 & 4: KL identity, argmin minimality, marginal preservation -------------

void criterion_kl_identity_and_marginals() {
    gen::SplitMix64 rng(20240602, 0);
    for (int instance = 0; instance < 200; ++instance) {
        // random rational-mass distribution over a product domain of <= 3^4 cells
        std::size_t arity = 2 + rng.below(3);
        std::vector<std::uint64_t> dims(arity);
        for (auto &d : dims) d = 2 + rng.below(2);  // 2 or 3 per attribute
        auto schema = gen::make_schema(dims);
        auto rel = gen::random_count_relation(rng, schema, 4);
        auto p = empirical(rel);
        auto tree = gen::random_join_tree(rng, schema);

        double j = j_measure(tree, p);
        auto pt = factorized_distribution(tree, p);
        double kl = kl_to_factorized(p, pt);
        require(std::fabs(j - kl) <= 1e-9,
                "|J - D(P||P_T)| = " + fmt_double(std::fabs(j - kl)));

        // marginal preservation, exact in rationals
        auto dense = oracle::dense_from_empirical(p);
        auto dense_pt = oracle::oracle_enumerate_pt(tree, dense);
        require(dense_pt.total() == 1, "P_T mass != 1 in exact arithmetic");
        for (const auto &node : tree.nodes()) {
            std::vector<std::string> names;
            for (std::size_t i : mask_indices(node.bag)) names.push_back(schema->at(i).name);
            require(oracle::oracle_marginal(dense_pt, names) ==
                        oracle::oracle_marginal(dense, names),
                    "bag marginal of P_T differs from P in exact arithmetic");
        }
        auto order = dfs_order(tree);
        for (std::size_t i = 1; i < order.size(); ++i) {
            std::vector<std::string> names;
            for (std::size_t a : mask_indices(order.seps[i]))
                names.push_back(schema->at(a).name);
            require(oracle::oracle_marginal(dense_pt, names) ==
                        oracle::oracle_marginal(dense, names),
                    "separator marginal of P_T differs from P in exact arithmetic");
        }

        // minimality against 50 perturbed tree-modeling distributions
        auto pd = p.to_distribution();
        for (int q = 0; q < 50; ++q) {
            auto candidate = gen::perturbed_tree_distribution(rng, tree, p);
            double d = info::kl_divergence(pd, candidate);
            require(d >= kl - 1e-12, "found Q modeling T with D(P||Q) = " + fmt_double(d) +
                                         " below D(P||P_T) = " + fmt_double(kl));
        }
    }
}

// --- 5: deterministic inequality chain ----------------------------------------

void criterion_inequality_chain() {
    gen::SplitMix64 rng(20240603, 0);
    for (int instance = 0; instance < 500; ++instance) {
        std::size_t arity = 2 + rng.below(4);  // <= 5 attributes
        std::vector<std::uint64_t> dims(arity);
        for (auto &d : dims) d = 2 + rng.below(5);  // domains <= 6
        auto schema = gen::make_schema(dims);
        u128 cells = 1;
        for (auto d : dims) cells *= d;
        std::uint64_t cap = std::min<std::uint64_t>(200, static_cast<std::uint64_t>(cells));
        auto r = gen::random_set_relation(rng, schema, 1 + rng.below(cap));
        auto tree = gen::random_join_tree(rng, schema);
        auto order = dfs_order(tree);
        auto p = empirical(r);

        double j = j_measure(tree, p);
        auto jb = j_bounds(tree, p, order);
        require(jb.lower <= j + 1e-9 && j <= jb.upper + 1e-9,
                "sandwich violated: max_I=" + fmt_double(jb.lower) + " J=" + fmt_double(j) +
                    " sum_I=" + fmt_double(jb.upper));

        auto chain = bounds::chain_inequality(r, tree, order);
        require(j <= chain.lhs + 1e-9, "J > log(1+rho)");
        require(chain.lhs <= chain.rhs + 1e-9, "log(1+rho) > sum of per-MVD terms");

        u128 counted = join_size(r, tree);
        if (counted <= 10000) {
            std::vector<Relation> projections;
            for (const auto &node : tree.nodes()) projections.push_back(r.project(node.bag));
            require(counted == u128{oracle::oracle_join(projections).size()},
                    "join size differs from the nested-loop oracle");
        }
    }
}

// --- 6: scatter gap shrinks with growing domains --------------------------------

void criterion_scatter_gap() {
    const std::uint64_t seed = 424242;
    for (double target : {1.0, 3.0}) {
        std::vector<double> medians;
        for (std::uint64_t d : {8ull, 16ull, 32ull, 64ull}) {
            auto rows = randmodel::scatter_experiment(d, {target}, 200, seed);
            std::vector<double> gaps;
            for (const auto &row : rows) gaps.push_back(row.log1p_rho_target - row.i_nats);
            std::sort(gaps.begin(), gaps.end());
            medians.push_back(0.5 * (gaps[99] + gaps[100]));
        }
        for (std::size_t i = 0; i < medians.size(); ++i) {
            require(medians[i] > 0.0, "median gap not positive at configuration " +
                                          std::to_string(i) + " rho=" + fmt_double(target));
            if (i > 0)
                require(medians[i] < medians[i - 1],
                        "median gap not strictly decreasing at rho=" + fmt_double(target));
        }
        require(medians.back() <= medians.front() / 2.0,
                "gap(d=64) > gap(d=8)/2 at rho=" + fmt_double(target));
    }
}

// --- 7: entropy confidence coverage in the guarantee regime ---------------------

void criterion_entropy_coverage() {
    const std::uint64_t d = 4096;
    const std::uint64_t eta = 9000000;
    const double delta = 0.1;

    auto eb = bounds::entropy_confidence(d, d, eta, delta);
    require(eb.condition_ok, "qualifying condition does not hold at eta = 9e6");
    require(static_cast<double>(eta) >= eb.eta_threshold, "threshold arithmetic inconsistent");

    randmodel::RandomModelSpec spec;
    spec.dims = {d, d};
    spec.n = eta;
    spec.seed = 20240607;
    spec.trials = 20;
    auto trials = randmodel::run_mvd_trials(spec, delta);
    int covered = 0;
    double max_dev = 0.0;
    const double log_d = std::log(static_cast<double>(d));
    for (const auto &t : trials) {
        require(t.entropy_lower.has_value(), "missing entropy bound on a d_C=1 trial");
        if (*t.entropy_pass) ++covered;
        double dev = log_d - t.h_a;
        require(dev >= -1e-9, "H(A) exceeded log d_A");
        max_dev = std::max(max_dev, dev);
        require(dev < 0.01, "entropy deviation " + fmt_double(dev) + " >= 0.01 nats");
    }
    require(covered >= 19, "entropy bound covered only " + std::to_string(covered) + "/20");

    struct rusage usage {};
    getrusage(RUSAGE_SELF, &usage);
    require(usage.ru_maxrss < 512 * 1024,
            "peak RSS " + std::to_string(usage.ru_maxrss / 1024) + " MB exceeds 512 MB");
}

// --- 8: MVD bound plumbing at moderate scale ------------------------------------

void criterion_mvd_bound_coverage() {
    randmodel::RandomModelSpec spec;
    spec.dims = {64, 64, 4};
    spec.n = 8192;
    spec.seed = 20240608;
    spec.trials = 200;
    const double delta = 0.1;
    auto eps = bounds::epsilon_star(bounds::MvdDims::normalized(64, 64, 4), spec.n, delta);
    require(!eps.condition_ok, "expected the guarantee condition to fail at this scale");
    auto trials = randmodel::run_mvd_trials(spec, delta);
    std::uint64_t passes = 0;
    for (const auto &t : trials) passes += t.mvd_bound_pass;
    require(passes == trials.size(),
            "coverage " + std::to_string(passes) + "/" + std::to_string(trials.size()));
}

// --- 9: byte-identical reruns of randomized commands ----------------------------

void criterion_determinism() {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / ("ajd_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto slurp = [](const fs::path &p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto run = [](std::vector<std::string> args) { return cli::run(args); };

    auto s1 = dir / "s1.csv", s2 = dir / "s2.csv";
    require(run({"scatter", "--d-list", "8,16", "--rho-list", "1,3", "--trials", "25", "--seed",
                 "99", "--out", s1.string()}) == 0,
            "scatter run failed");
    require(run({"scatter", "--d-list", "8,16", "--rho-list", "1,3", "--trials", "25", "--seed",
                 "99", "--out", s2.string()}) == 0,
            "scatter rerun failed");
    require(slurp(s1) == slurp(s2), "scatter CSV not byte-identical");
    require(slurp(s1.string() + ".json") == slurp(s2.string() + ".json"),
            "scatter sidecar not byte-identical");

    auto m1 = dir / "m1.json", m2 = dir / "m2.json";
    auto c1 = dir / "c1.csv", c2 = dir / "c2.csv";
    require(run({"montecarlo", "--dA", "32", "--dB", "32", "--dC", "2", "--N", "512", "--trials",
                 "40", "--seed", "5", "--out", m1.string(), "--csv", c1.string()}) == 0,
            "montecarlo run failed");
    require(run({"montecarlo", "--dA", "32", "--dB", "32", "--dC", "2", "--N", "512", "--trials",
                 "40", "--seed", "5", "--out", m2.string(), "--csv", c2.string()}) == 0,
            "montecarlo rerun failed");
    require(slurp(m1) == slurp(m2), "montecarlo summary not byte-identical");
    require(slurp(c1) == slurp(c2), "montecarlo CSV not byte-identical");

    // analyze determinism on a fixture
    auto rel = dir / "r.csv";
    auto tree = dir / "t.json";
    {
        std::ofstream r(rel, std::ios::binary);
        r << "A,B,C\n0,0,0\n0,1,1\n1,0,0\n1,1,1\n0,0,1\n";
        std::ofstream t(tree, std::ios::binary);
        t << R"({"nodes":[{"id":0,"bag":["A","B"]},{"id":1,"bag":["B","C"]}],)"
          << R"("edges":[[0,1]],"domains":{"A":2,"B":2,"C":2}})";
    }
    auto a1 = dir / "a1.json", a2 = dir / "a2.json";
    require(run({"analyze", "--relation", rel.string(), "--tree", tree.string(), "--out",
                 a1.string()}) == 0,
            "analyze run failed");
    require(run({"analyze", "--relation", rel.string(), "--tree", tree.string(), "--out",
                 a2.string()}) == 0,
            "analyze rerun failed");
    require(slurp(a1) == slurp(a2), "analyze report not byte-identical");

    fs::remove_all(dir);
}

struct Criterion {
    int number;
    std::string name;
    long long budget_ms;  // 0 = unbudgeted
    std::function<void()> body;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "tightness family: J meets log(1+rho), rho = N-1 exactly", 1000,
         criterion_tightness},
        {2, "losslessness: J = 0 <=> rho = 0, tuple deletion breaks both", 10000,
         criterion_lossless_characterization},
        {3, "KL identity and argmin minimality of the tree factorization", 30000,
         criterion_kl_identity_and_marginals},
        {4, "bag/separator marginal preservation (exact, shares #3 instances)", 0,
         [] { /* verified inside criterion 3 over the same instance set */ }},
        {5, "deterministic inequality chain with oracle-checked join sizes", 60000,
         criterion_inequality_chain},
        {6, "scatter experiment: median gap shrinks as domains grow", 60000,
         criterion_scatter_gap},
        {7, "entropy confidence coverage at d=4096, eta=9e6", 180000,
         criterion_entropy_coverage},
        {8, "MVD mutual-information bound coverage at d=64, d_C=4", 60000,
         criterion_mvd_bound_coverage},
        {9, "randomized commands rerun byte-identically", 0, criterion_determinism},
    };

    int failures = 0;
    for (auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.body();
        } catch (const Failure &f) {
            error = f.message;
        } catch (const std::exception &e) {
            error = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        if (error.empty() && c.budget_ms > 0 && ms > c.budget_ms)
            error = "runtime " + std::to_string(ms) + " ms exceeds the " +
                    std::to_string(c.budget_ms) + " ms budget";
        if (error.empty()) {
            std::printf("PASS  criterion %d: %s  (%lld ms)\n", c.number, c.name.c_str(),
                        static_cast<long long>(ms));
        } else {
            ++failures;
            std::printf("FAIL  criterion %d: %s  (%lld ms)\n      %s\n", c.number, c.name.c_str(),
                        static_cast<long long>(ms), error.c_str());
        }
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
