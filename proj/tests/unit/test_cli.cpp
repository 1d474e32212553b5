#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ajd/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ajd_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int &counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string &name, const std::string &content) const {
        auto p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
    std::string slurp(const std::string &name) const {
        std::ifstream in(path / name, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

int run(std::initializer_list<std::string> args) {
    return ajd::cli::run(std::vector<std::string>(args));
}

}  // namespace

TEST_CASE("cli analyze: end to end with byte-identical reruns") {
    TempDir dir;
    auto rel = dir.file("r.csv", "A,B,C\n0,0,0\n0,1,1\n1,0,0\n1,1,1\n0,0,1\n");
    auto tree = dir.file("t.json", R"({
      "nodes": [{"id": 0, "bag": ["A","B"]}, {"id": 1, "bag": ["B","C"]}],
      "edges": [[0,1]],
      "domains": {"A": 2, "B": 2, "C": 2}
    })");
    auto out1 = (dir.path / "report1.json").string();
    auto out2 = (dir.path / "report2.json").string();
    CHECK(run({"analyze", "--relation", rel, "--tree", tree, "--out", out1}) == 0);
    CHECK(run({"analyze", "--relation", rel, "--tree", tree, "--out", out2}) == 0);
    auto text1 = dir.slurp("report1.json");
    CHECK(text1 == dir.slurp("report2.json"));

    auto j = nlohmann::json::parse(text1);
    CHECK(j.contains("J"));
    CHECK(j.contains("rho"));
    CHECK(j.contains("log1p_rho"));
    CHECK(j.contains("rho_min"));
    CHECK(j.contains("delta"));
    CHECK(j["log_base"] == "e");
    CHECK(j["mvds"].is_array());
    CHECK(j["mvds"][0].contains("I"));
    CHECK(j["mvds"][0].contains("epsilon"));
    CHECK(j["mvds"][0].contains("condition_ok"));
    CHECK(j.contains("upper_bound_sumI"));
    CHECK(j.contains("upper_bound_mJ"));
    CHECK(j["verdicts"]["j_le_log1p_rho"].is_boolean());
}

TEST_CASE("cli analyze: input errors exit with code 2") {
    TempDir dir;
    auto tree = dir.file("t.json", R"({"nodes":[{"id":0,"bag":["A"]}],"edges":[]})");
    CHECK(run({"analyze", "--relation", (dir.path / "missing.csv").string(), "--tree", tree}) ==
          2);
    auto rel = dir.file("r.csv", "A\n0\n");
    CHECK(run({"analyze", "--relation", rel, "--tree", tree, "--delta", "7"}) == 2);
    auto bad_tree = dir.file("bad.json", "{");
    CHECK(run({"analyze", "--relation", rel, "--tree", bad_tree}) == 2);
    CHECK(run({"nonsense"}) == 2);
}

TEST_CASE("cli tightness") {
    TempDir dir;
    auto out = (dir.path / "tight.json").string();
    CHECK(run({"tightness", "--n", "2", "--out", out}) == 0);
    auto j = nlohmann::json::parse(dir.slurp("tight.json"));
    CHECK(j["rho"] == 1.0);
    CHECK(j["tightness"]["rho_exact"] == true);
    CHECK(j["tightness"]["gap_within_1e-9"] == true);
    CHECK(run({"tightness", "--n", "1"}) == 2);
}

TEST_CASE("cli scatter: deterministic CSV plus sidecar") {
    TempDir dir;
    auto out1 = (dir.path / "s1.csv").string();
    auto out2 = (dir.path / "s2.csv").string();
    CHECK(run({"scatter", "--d-list", "8", "--rho-list", "1", "--trials", "5", "--seed", "3",
               "--out", out1}) == 0);
    CHECK(run({"scatter", "--d-list", "8", "--rho-list", "1", "--trials", "5", "--seed", "3",
               "--out", out2}) == 0);
    auto csv = dir.slurp("s1.csv");
    CHECK(csv == dir.slurp("s2.csv"));
    CHECK(csv.rfind("trial,d,N,rho_target,log1p_rho_target,rho,log1p_rho,I_nats\n", 0) == 0);
    auto meta = nlohmann::json::parse(dir.slurp("s1.csv.json"));
    CHECK(meta["seed"] == 3);
}

TEST_CASE("cli montecarlo: summary and trial csv") {
    TempDir dir;
    auto out = (dir.path / "mc.json").string();
    auto csv = (dir.path / "mc.csv").string();
    CHECK(run({"montecarlo", "--dA", "16", "--dB", "16", "--N", "64", "--trials", "20", "--seed",
               "11", "--out", out, "--csv", csv}) == 0);
    auto j = nlohmann::json::parse(dir.slurp("mc.json"));
    CHECK(j["coverage"]["mvd_mi_bound"]["trials"] == 20);
    CHECK(j["coverage"]["mvd_mi_bound"]["rate"] == 1.0);
    CHECK(j["coverage"].contains("entropy_bound"));
    auto text = dir.slurp("mc.csv");
    CHECK(text.rfind("trial,d_A,d_B,d_C,N,delta,I_nats,rho,log1p_rho,epsilon,pass\n", 0) == 0);
    // 20 data rows
    CHECK(std::count(text.begin(), text.end(), '\n') == 21);

    // rerun is byte-identical
    auto out2 = (dir.path / "mc2.json").string();
    CHECK(run({"montecarlo", "--dA", "16", "--dB", "16", "--N", "64", "--trials", "20", "--seed",
               "11", "--out", out2}) == 0);
    CHECK(dir.slurp("mc.json") == dir.slurp("mc2.json"));
}

TEST_CASE("cli verify: quick suite passes, fault injection fails") {
    CHECK(run({"verify", "--quick", "--seed", "7"}) == 0);
    CHECK(run({"verify", "--quick", "--seed", "7", "--inject-fault"}) == 1);
}

TEST_CASE("cli analyze honors the tree file root and the --root override") {
    TempDir dir;
    auto rel = dir.file("r.csv", "A,B,C\n0,0,0\n0,1,1\n1,0,0\n");
    auto tree = dir.file("t.json", R"({
      "nodes": [{"id": 0, "bag": ["A","B"]}, {"id": 1, "bag": ["B","C"]}],
      "edges": [[0,1]],
      "root": 1
    })");
    auto out = (dir.path / "r1.json").string();
    CHECK(run({"analyze", "--relation", rel, "--tree", tree, "--out", out}) == 0);
    CHECK(nlohmann::json::parse(dir.slurp("r1.json"))["root"] == 1);
    CHECK(run({"analyze", "--relation", rel, "--tree", tree, "--root", "0", "--out", out}) == 0);
    CHECK(nlohmann::json::parse(dir.slurp("r1.json"))["root"] == 0);
}
