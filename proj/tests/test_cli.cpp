#include <doctest.h>

#include "wavecount/config.hpp"
#include "wavecount/distributions.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& workdir) {
    const fs::path out = workdir / "stdout.txt";
    const std::string cmd = std::string("\"") + WAVECOUNT_CLI_PATH + "\" " + args + " > \"" +
                            out.string() + "\" 2> \"" + (workdir / "stderr.txt").string() +
                            "\"";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    std::ifstream in(out);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string repo_file(const char* rel) {
    return std::string(WAVECOUNT_REPO_DIR) + "/" + rel;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() /
                     ("wavecount_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("params reports the same scalars as the library") {
    TempDir tmp;
    const auto run =
        run_cli("params --config \"" + repo_file("configs/two_disc_wc.json") + "\"", tmp.path);
    REQUIRE(run.exit_code == 0);
    const json doc = json::parse(run.output);
    CHECK(doc["mode"] == "WC");
    CHECK(doc["feasible"].get<bool>());

    const wavecount::Experiment exp =
        wavecount::load_experiment(repo_file("configs/two_disc_wc.json"));
    const auto params = exp.params();
    CHECK(doc["detectors"][0]["sigma"].get<double>() ==
          doctest::Approx(*params[0].sigma).epsilon(1e-15));
    CHECK(doc["detectors"][0]["abs_s"].get<double>() ==
          doctest::Approx(std::abs(*params[0].s)).epsilon(1e-15));
    CHECK(doc["detectors"][1]["P"].get<double>() ==
          doctest::Approx(*params[1].P).epsilon(1e-15));
}

TEST_CASE("params echoes direct-mode scalars") {
    TempDir tmp;
    const auto run =
        run_cli("params --config \"" + repo_file("configs/direct_wc.json") + "\"", tmp.path);
    REQUIRE(run.exit_code == 0);
    const json doc = json::parse(run.output);
    CHECK(doc["detectors"][0]["sigma"].get<double>() == 1.0);
    CHECK(doc["detectors"][0]["s"][0].get<double>() == 0.5);
    CHECK(doc["detectors"][1]["P"].get<double>() == 0.4);
}

TEST_CASE("infeasible parameters exit with code 2 and name the constraint") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "infeasible.json";
    std::ofstream(cfg) << R"({"detectors": [
        {"mode": "wave", "sigma": 1.0, "s": 0.8},
        {"mode": "count", "P": 0.5}]})";
    const auto run = run_cli("params --config \"" + cfg.string() + "\"", tmp.path);
    CHECK(run.exit_code == 2);
    const json doc = json::parse(run.output);
    CHECK_FALSE(doc["feasible"].get<bool>());
    REQUIRE(doc["violations"].size() == 1);
    CHECK(doc["violations"][0].get<std::string>().find("1 - P - |s|^2") !=
          std::string::npos);
}

TEST_CASE("config syntax errors exit with code 2") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "broken.json";
    std::ofstream(cfg) << "{ not json";
    CHECK(run_cli("params --config \"" + cfg.string() + "\"", tmp.path).exit_code == 2);
    CHECK(run_cli("params --config \"" + (tmp.path / "missing.json").string() + "\"",
                  tmp.path)
              .exit_code == 2);
}

TEST_CASE("fig2 dataset: shared intersection at w = sigma, vacuum curve at s = 0") {
    TempDir tmp;
    const auto run = run_cli("figure --which fig2", tmp.path);
    REQUIRE(run.exit_code == 0);

    std::istringstream csv(run.output);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "w,s,density");
    std::map<std::string, std::vector<double>> at_sigma;  // density values at w = +-1
    double gauss_mismatch = 0.0;
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string w_str, s_str, d_str;
        std::getline(row, w_str, ',');
        std::getline(row, s_str, ',');
        std::getline(row, d_str, ',');
        const double w = std::stod(w_str);
        const double density = std::stod(d_str);
        if (w_str == "1" || w_str == "-1") at_sigma[w_str].push_back(density);
        if (s_str == "0") {
            const double gauss = std::exp(-0.5 * w * w) / std::sqrt(2.0 * M_PI);
            gauss_mismatch = std::max(gauss_mismatch, std::abs(density - gauss));
        }
    }
    REQUIRE(at_sigma["1"].size() == 5);  // one per s value
    for (const double d : at_sigma["1"]) CHECK(d == at_sigma["1"].front());
    for (const double d : at_sigma["-1"]) CHECK(d == at_sigma["-1"].front());
    CHECK(gauss_mismatch < 1e-15);
}

TEST_CASE("fig3 rejects overlaps beyond the symmetric bound") {
    TempDir tmp;
    CHECK(run_cli("figure --which fig3 --s 0.8", tmp.path).exit_code == 2);
    const auto ok = run_cli("figure --which fig3 --s 0.5 --points 21", tmp.path);
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.substr(0, 16) == "s,w1,w2,density\n");
}

TEST_CASE("fig4 dataset peaks near the known maximum") {
    TempDir tmp;
    const auto run = run_cli("figure --which fig4 --ns 61 --nP 61", tmp.path);
    REQUIRE(run.exit_code == 0);
    std::istringstream csv(run.output);
    std::string line;
    std::getline(csv, line);
    double best = 0.0;
    std::size_t feasible = 0, infeasible = 0;
    while (std::getline(csv, line)) {
        const auto last_comma = line.rfind(',');
        const bool feas = line.substr(last_comma + 1) == "1";
        (feas ? feasible : infeasible) += 1;
        if (!feas) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        best = std::max(best, std::stod(line.substr(c2 + 1, last_comma - c2 - 1)));
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
    CHECK(std::abs(best - 0.18) < 0.005);
}

TEST_CASE("mi subcommand") {
    TempDir tmp;
    const auto zero = run_cli("mi --s 0 --P 0.3", tmp.path);
    REQUIRE(zero.exit_code == 0);
    CHECK(std::abs(json::parse(zero.output)["I"].get<double>()) < 1e-10);

    const auto cc = run_cli("mi --cc --P1 0.5 --P2 0.5", tmp.path);
    REQUIRE(cc.exit_code == 0);
    CHECK(json::parse(cc.output)["I"].get<double>() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));

    CHECK(run_cli("mi --s 0.9 --P 0.5", tmp.path).exit_code == 2);
}

TEST_CASE("seeded sampling is byte-identical across runs") {
    TempDir tmp;
    const std::string args = "sample --mode wc --n 1000 --seed 7 --sigma 1 --s 0.5 --P 0.4";
    const auto first = run_cli(args + " --out \"" + (tmp.path / "r1").string() + "\"", tmp.path);
    const auto second = run_cli(args + " --out \"" + (tmp.path / "r2").string() + "\"", tmp.path);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    const std::string a = slurp(tmp.path / "r1" / "sample_wc.csv");
    const std::string b = slurp(tmp.path / "r2" / "sample_wc.csv");
    CHECK(a.size() > 1000);
    CHECK(a == b);

    // the manifest records the inputs needed for an exact re-run
    const json manifest = json::parse(slurp(tmp.path / "r1" / "sample_wc.csv.manifest.json"));
    CHECK(manifest["subcommand"] == "sample");
    CHECK(manifest["seed"].get<std::uint64_t>() == 7);
    CHECK(manifest["parameters"]["P"].get<double>() == 0.4);
}

TEST_CASE("sampling from a config uses the derived scalars") {
    TempDir tmp;
    const auto run = run_cli("sample --n 500 --seed 3 --config \"" +
                                 repo_file("configs/two_disc_wc.json") + "\"",
                             tmp.path);
    REQUIRE(run.exit_code == 0);
    CHECK(run.output.substr(0, 4) == "w,c\n");
}

TEST_CASE("report subcommands offer a csv format") {
    TempDir tmp;
    const auto params = run_cli("params --format csv --config \"" +
                                    repo_file("configs/direct_wc.json") + "\"",
                                tmp.path);
    REQUIRE(params.exit_code == 0);
    CHECK(params.output.substr(0, params.output.find('\n')) ==
          "index,mode,sigma,s_re,s_im,abs_s,P,feasible");

    const auto mi = run_cli("mi --cc --P1 0.25 --P2 0.25 --format csv", tmp.path);
    REQUIRE(mi.exit_code == 0);
    CHECK(mi.output.substr(0, mi.output.find('\n')) == "I,P1,P2");
    CHECK(run_cli("mi --s 0.1 --P 0.1 --format yaml", tmp.path).exit_code == 2);
}

TEST_CASE("oracle subcommand reports all-pass") {
    TempDir tmp;
    const auto run = run_cli("oracle --G 4 --nmax 3", tmp.path);
    REQUIRE(run.exit_code == 0);
    const json doc = json::parse(run.output);
    CHECK(doc["all_pass"].get<bool>());
}

TEST_SUITE_END();
