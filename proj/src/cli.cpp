#include "ajd/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "ajd/csv.hpp"
#include "ajd/report.hpp"
#include "ajd/verify.hpp"

namespace ajd {
namespace cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;

void write_output(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write to '" + out_path + "'");
    out << text;
}

void write_sidecar(const report::Json &meta, const std::string &csv_path) {
    if (csv_path.empty()) return;
    std::ofstream out(csv_path + ".json", std::ios::binary);
    if (!out) throw Error("cannot write sidecar next to '" + csv_path + "'");
    out << meta.dump(2) << '\n';
}

std::vector<std::uint64_t> parse_u64_list(const std::string &text) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stoull(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw Error("empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string &text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw Error("empty list");
    return out;
}

struct AnalyzeArgs {
    std::string relation_path;
    std::string tree_path;
    double delta = 0.1;
    std::string base = "e";
    std::string out;
    bool no_header = false;
    std::string delimiter = ",";
    int root = -1;
};

int cmd_analyze(const AnalyzeArgs &args) {
    auto tree_file = load_jointree_file(args.tree_path);

    CsvOptions csv;
    csv.header = !args.no_header;
    if (args.delimiter.size() != 1) throw Error("delimiter must be a single character");
    csv.delimiter = args.delimiter[0];
    csv.domains = tree_file.domains;
    Relation r = load_csv_file(args.relation_path, csv);

    auto tree = bind_jointree(tree_file, r.schema_ptr());
    bounds::AnalyzeOptions opts;
    opts.delta = args.delta;
    opts.base = parse_log_base(args.base);
    if (args.root >= 0)
        opts.root = args.root;
    else if (tree_file.root)
        opts.root = *tree_file.root;

    auto rep = bounds::analyze(r, tree, opts);
    write_output(report::to_json(rep, tree).dump(2) + "\n", args.out);
    return kExitOk;
}

int cmd_tightness(std::uint64_t n, const std::string &base, const std::string &out) {
    if (n < 2) throw Error("tightness family needs N >= 2");
    Relation r = make_diagonal_relation(n);
    JoinTree tree(r.schema_ptr(),
                  {{0, AttrMask{1}}, {1, AttrMask{2}}}, {{0, 1}});
    bounds::AnalyzeOptions opts;
    opts.base = parse_log_base(base);
    auto rep = bounds::analyze(r, tree, opts);

    bool rho_exact = rep.rho == static_cast<double>(n - 1);
    bool gap_zero = std::fabs(rep.lower.gap) <= 1e-9;
    auto j = report::to_json(rep, tree);
    j["tightness"] = report::Json{{"N", n},
                                  {"rho_expected", n - 1},
                                  {"rho_exact", rho_exact},
                                  {"gap_within_1e-9", gap_zero}};
    write_output(j.dump(2) + "\n", out);
    return (rho_exact && gap_zero) ? kExitOk : kExitVerificationFailure;
}

int cmd_scatter(const std::string &d_list, const std::string &rho_list, std::uint32_t trials,
                std::uint64_t seed, const std::string &out) {
    auto ds = parse_u64_list(d_list);
    auto rhos = parse_double_list(rho_list);
    std::vector<randmodel::ScatterRow> rows;
    for (std::uint64_t d : ds) {
        auto batch = randmodel::scatter_experiment(d, rhos, trials, seed);
        rows.insert(rows.end(), batch.begin(), batch.end());
    }
    write_output(report::scatter_csv(rows), out);
    report::Json meta;
    meta["seed"] = seed;
    meta["d"] = ds;
    meta["rho_targets"] = rhos;
    meta["trials"] = trials;
    meta["log_base"] = "e";
    meta["version"] = kToolVersion;
    write_sidecar(meta, out);
    return kExitOk;
}

struct MonteCarloArgs {
    std::uint64_t d_a = 0, d_b = 0, d_c = 1;
    std::uint64_t n = 0;
    double delta = 0.1;
    std::uint32_t trials = 100;
    std::uint64_t seed = 0;
    std::string out;
    std::string csv;
};

int cmd_montecarlo(const MonteCarloArgs &args) {
    if (args.d_c < 1) throw Error("dC must be at least 1");
    randmodel::RandomModelSpec spec;
    spec.dims = args.d_c > 1 ? std::vector<std::uint64_t>{args.d_a, args.d_b, args.d_c}
                             : std::vector<std::uint64_t>{args.d_a, args.d_b};
    spec.n = args.n;
    spec.seed = args.seed;
    spec.trials = args.trials;
    auto trials = randmodel::run_mvd_trials(spec, args.delta);
    if (!args.csv.empty()) {
        write_output(report::trials_csv(trials, spec, args.delta), args.csv);
        write_sidecar(report::sidecar(spec, args.delta), args.csv);
    }
    write_output(report::montecarlo_summary(trials, spec, args.delta).dump(2) + "\n", args.out);
    return kExitOk;
}

int cmd_verify(std::uint64_t seed, bool quick, bool inject_fault) {
    verify::Options opts;
    opts.seed = seed;
    opts.quick = quick;
    opts.inject_fault = inject_fault;
    auto start = std::chrono::steady_clock::now();
    auto results = verify::run_all(opts);
    bool all_ok = true;
    for (const auto &res : results) {
        bool ok = res.passed();
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << res.name << "  (" << res.trials
                  << " trials";
        if (!ok) std::cout << ", " << res.failures << " failures; " << res.detail;
        std::cout << ")\n";
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    std::cout << (all_ok ? "OK" : "FAILED") << "  " << results.size() << " properties in "
              << elapsed << " ms (seed " << seed << (quick ? ", quick" : "") << ")\n";
    return all_ok ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string> &args) {
    CLI::App app{"Acyclic join dependency loss analysis"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto *analyze = app.add_subcommand(
        "analyze", "Report the J-measure, spurious ratio and all bounds for a relation + tree");
    analyze->add_option("--relation", an.relation_path, "relation CSV path")->required();
    analyze->add_option("--tree", an.tree_path, "join-tree JSON path")->required();
    analyze->add_option("--delta", an.delta, "confidence parameter in (0,1)");
    analyze->add_option("--base", an.base, "log base for reported measures: e or 2");
    analyze->add_option("--out", an.out, "output path (default stdout)");
    analyze->add_flag("--no-header", an.no_header, "CSV has no header row");
    analyze->add_option("--delimiter", an.delimiter, "CSV delimiter (default ,)");
    analyze->add_option("--root", an.root, "root node id (default: smallest id)");

    std::uint64_t tight_n = 2;
    std::string tight_base = "e", tight_out;
    auto *tightness = app.add_subcommand(
        "tightness", "Diagonal-relation family where J meets log(1+rho) exactly");
    tightness->add_option("--n", tight_n, "relation size N >= 2")->required();
    tightness->add_option("--base", tight_base, "log base: e or 2");
    tightness->add_option("--out", tight_out, "output path (default stdout)");

    std::string sc_d = "8,16,32,64", sc_rho = "1,3", sc_out;
    std::uint32_t sc_trials = 200;
    std::uint64_t sc_seed = 1;
    auto *scatter = app.add_subcommand(
        "scatter", "Mutual information vs log(1+rho) samples under the random relation model");
    scatter->add_option("--d-list", sc_d, "comma-separated domain sizes");
    scatter->add_option("--rho-list", sc_rho, "comma-separated target spurious ratios");
    scatter->add_option("--trials", sc_trials, "trials per configuration");
    scatter->add_option("--seed", sc_seed, "RNG seed");
    scatter->add_option("--out", sc_out, "CSV output path (default stdout)");

    MonteCarloArgs mc;
    auto *montecarlo = app.add_subcommand(
        "montecarlo", "Coverage of the high-probability bounds under the random relation model");
    montecarlo->add_option("--dA", mc.d_a, "domain size of A")->required();
    montecarlo->add_option("--dB", mc.d_b, "domain size of B")->required();
    montecarlo->add_option("--dC", mc.d_c, "domain size of C (default 1)");
    montecarlo->add_option("--N", mc.n, "tuples per trial")->required();
    montecarlo->add_option("--delta", mc.delta, "confidence parameter");
    montecarlo->add_option("--trials", mc.trials, "number of trials");
    montecarlo->add_option("--seed", mc.seed, "RNG seed");
    montecarlo->add_option("--out", mc.out, "summary JSON path (default stdout)");
    montecarlo->add_option("--csv", mc.csv, "optional per-trial CSV path");

    std::uint64_t v_seed = 42;
    bool v_quick = false, v_fault = false;
    auto *verify_cmd =
        app.add_subcommand("verify", "Run the property suites of every module");
    verify_cmd->add_option("--seed", v_seed, "RNG seed");
    verify_cmd->add_flag("--quick", v_quick, "reduced trial counts");
    verify_cmd->add_flag("--inject-fault", v_fault,
                         "corrupt a reference oracle to prove the suite can fail");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cout << report::Json{{"error", e.what()}}.dump(2) << std::endl;
        return kExitInputError;
    }

    try {
        if (*analyze) return cmd_analyze(an);
        if (*tightness) return cmd_tightness(tight_n, tight_base, tight_out);
        if (*scatter) return cmd_scatter(sc_d, sc_rho, sc_trials, sc_seed, sc_out);
        if (*montecarlo) return cmd_montecarlo(mc);
        if (*verify_cmd) return cmd_verify(v_seed, v_quick, v_fault);
    } catch (const Error &e) {
        std::cout << report::Json{{"error", e.what()}}.dump(2) << std::endl;
        return kExitInputError;
    } catch (const std::exception &e) {
        std::cout << report::Json{{"error", e.what()}}.dump(2) << std::endl;
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace cli
}  // namespace ajd
