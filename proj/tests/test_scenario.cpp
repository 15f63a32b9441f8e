#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bw/scenario.hpp"

using namespace bw;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "bw_scenario_test") {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("builtin example13") {
    const Scenario sc = builtin_scenario("example13");
    CHECK(sc.support_radius == 10.0);
    CHECK(sc.delta == 1e-3);
    CHECK(sc.diamond.r == 20.0);
    CHECK_NOTHROW(make_initial_data(sc));
    CHECK(is_builtin_scenario("smalldata"));
    CHECK(!is_builtin_scenario("nope"));
    CHECK_THROWS(builtin_scenario("nope"));
}

TEST_CASE("all builtins produce valid data") {
    for (const char* name : {"example13", "smalldata", "degenerate"}) {
        const InitialData d = make_initial_data(builtin_scenario(name));
        CHECK(d.sup_phi0() < 1.0);
        CHECK(d.phi0(d.zero_radius() + 0.1) == 0.0);
    }
}

TEST_CASE("barrier violation rejected at parse time") {
    TempDir tmp;
    const fs::path p = tmp.path / "bad.json";
    // phi0 = 1.0 via flat spline samples
    std::ofstream(p) << R"({
      "name": "bad",
      "initial": {
        "kind": "spline_samples",
        "samples_x": [-2, -1, 0, 1, 2],
        "samples_phi0": [1.0, 1.0, 1.0, 1.0, 1.0],
        "samples_phi1": [0, 0, 0, 0, 0],
        "support_radius": 2.0
      }
    })";
    CHECK_THROWS_AS(parse_scenario(p), std::domain_error);
}

TEST_CASE("malformed files name the offending key") {
    TempDir tmp;
    const fs::path p = tmp.path / "broken.json";
    std::ofstream(p) << R"({"name": "x", "initial": {"kind": "closed_form_example"}})";
    try {
        parse_scenario(p);
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("initial.support_radius") != std::string::npos);
    }

    const fs::path q = tmp.path / "unknown_kind.json";
    std::ofstream(q)
        << R"({"name": "x", "initial": {"kind": "weird", "support_radius": 2.0}})";
    try {
        parse_scenario(q);
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("initial.kind") != std::string::npos);
    }
}

TEST_CASE("scenario round trip is byte identical") {
    TempDir tmp;
    for (const char* name : {"example13", "smalldata"}) {
        const Scenario sc = builtin_scenario(name);
        const fs::path p1 = tmp.path / "a.json";
        const fs::path p2 = tmp.path / "b.json";
        write_scenario(sc, p1);
        const Scenario rt = parse_scenario(p1);
        write_scenario(rt, p2);
        CHECK(slurp(p1) == slurp(p2));
    }
}

TEST_CASE("spline scenario from a samples file") {
    TempDir tmp;
    const fs::path csv = tmp.path / "samples.csv";
    {
        std::ofstream os(csv);
        os << "x,phi0,phi1\n";
        for (int k = 0; k <= 100; ++k) {
            const double x = -5.0 + 0.1 * k;
            os << x << ',' << 0.4 * std::exp(-x * x) << ',' << 0.0 << '\n';
        }
    }
    const fs::path p = tmp.path / "scenario.json";
    std::ofstream(p) << R"({
      "name": "from_samples",
      "initial": {"kind": "spline_samples", "samples_path": ")"
                     << csv.string() << R"(", "support_radius": 5.0},
      "diamond": {"u0": 2.0, "v0": 2.0, "r": 4.0}
    })";
    const Scenario sc = parse_scenario(p);
    const InitialData d = make_initial_data(sc);
    CHECK(d.phi0(0.0) == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("sweep plan round trip") {
    TempDir tmp;
    SweepPlan plan;
    plan.p_list = {15, 31};
    plan.lattice_n = 65;
    plan.piecewise_eps = 2.5e-4;
    const fs::path p = tmp.path / "plan.json";
    write_sweep_plan(plan, p);
    const SweepPlan rt = parse_sweep_plan(p);
    CHECK(rt.p_list == plan.p_list);
    CHECK(rt.lattice_n == plan.lattice_n);
    CHECK(rt.piecewise_eps == plan.piecewise_eps);
    CHECK(rt.dx_rule == plan.dx_rule);
}

TEST_CASE("run metadata") {
    TempDir tmp;
    write_run_metadata(tmp.path, "barrier-wave test", "config-text");
    CHECK(fs::exists(tmp.path / "run_meta.json"));
    const std::string body = slurp(tmp.path / "run_meta.json");
    CHECK(body.find("config_hash") != std::string::npos);
    CHECK(body.find("tool_version") != std::string::npos);
}
