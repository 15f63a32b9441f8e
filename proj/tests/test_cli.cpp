#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_tool(const std::string& args) {
    const std::string cmd = std::string(BWAVE_TOOL_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) : path(fs::temp_directory_path() / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("usage and error exit codes") {
    CHECK(run_tool("").exit_code == 2);
    CHECK(run_tool("frobnicate").exit_code == 2);
    const RunResult missing = run_tool("sweep --plan /nonexistent.json --out /tmp/bw_cli_x");
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("error") != std::string::npos);
    const RunResult help = run_tool("");
    CHECK(help.output.find("Usage") != std::string::npos);
}

TEST_CASE("ode subcommand writes the trajectory CSV") {
    TempDir tmp("bw_cli_ode");
    const fs::path csv = tmp.path / "ode.csv";
    const RunResult r =
        run_tool("ode --p 200 --phi0 0 --phi1 1 --t-end 1 --dt 1e-4 --out " + csv.string());
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(csv));
    std::ifstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,phi,phi_t,hamiltonian");
    CHECK(fs::exists(tmp.path / "run_meta.json"));
}

TEST_CASE("deterministic outputs across reruns") {
    TempDir tmp("bw_cli_det");
    const fs::path d1 = tmp.path / "run1";
    const fs::path d2 = tmp.path / "run2";
    for (const fs::path& d : {d1, d2}) {
        const RunResult r = run_tool("limit --scenario smalldata --diamond 2,2,4 --n 65 --out " +
                                     d.string());
        CHECK(r.exit_code == 0);
    }
    CHECK(slurp(d1 / "field.csv") == slurp(d2 / "field.csv"));
    CHECK(slurp(d1 / "defect.csv") == slurp(d2 / "defect.csv"));
    CHECK(slurp(d1 / "properties.json") == slurp(d2 / "properties.json"));
}

TEST_CASE("simulate and check round trip") {
    TempDir tmp("bw_cli_sim");
    const fs::path out = tmp.path / "sim";
    const RunResult r = run_tool(
        "simulate --scenario smalldata --p 63 --dx 0.004 --diamond 1,1,2 --n 33 --out " +
        out.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "field.csv"));
    CHECK(fs::exists(out / "energy.csv"));
    CHECK(fs::exists(out / "run_meta.json"));
    {
        std::ifstream is(out / "energy.csv");
        std::string header;
        std::getline(is, header);
        CHECK(header == "t,total,local");
    }
    const RunResult c =
        run_tool("check --field " + (out / "field.csv").string() + " --scenario smalldata");
    CHECK(c.exit_code == 0);
    const auto j = nlohmann::json::parse(c.output);
    CHECK(j.contains("barrier_violation"));
}

TEST_CASE("liouville emit and check") {
    TempDir tmp("bw_cli_lio");
    const fs::path csv = tmp.path / "psi.csv";
    CHECK(run_tool("liouville --family exp --a 1 --t0 0 --diamond 0,0,1 --n 65 --out " +
                   csv.string())
              .exit_code == 0);
    const RunResult r = run_tool("liouville --check residual --in " + csv.string());
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j.at("residual").get<double>() <= 1e-3);
}

TEST_CASE("limit oracle emission and certification") {
    TempDir tmp("bw_cli_orc");
    const fs::path out = tmp.path / "oracle";
    CHECK(run_tool("limit --oracle example --delta 1e-3 --diamond 2,2,4 --n 129 --out " +
                   out.string())
              .exit_code == 0);
    const RunResult r = run_tool("limit --check " + (out / "field.csv").string() +
                                 " --scenario example13");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j.at("barrier_violation").get<double>() <= 1e-12);
}

TEST_CASE("sweep subcommand with a plan file") {
    TempDir tmp("bw_cli_sweep");
    const fs::path plan = tmp.path / "plan.json";
    std::ofstream(plan) << R"({
      "scenario": "example13",
      "p_list": [15, 31],
      "diamond": {"u0": 1.5, "v0": 1.5, "r": 2.0},
      "triangle": true,
      "lattice_n": 97,
      "dx_rule": "scaled",
      "dx_scale": 8.0,
      "workers": 2
    })";
    const fs::path out = tmp.path / "out";
    const RunResult r =
        run_tool("sweep --plan " + plan.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "field_p15.csv"));
    CHECK(fs::exists(out / "field_p31.csv"));
    const auto j = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(j.at("per_p").size() == 2);
}
