#include "bw/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bw/limit.hpp"
#include "bw/numerics.hpp"
#include "bw/version.hpp"

namespace bw {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
    throw std::invalid_argument("scenario config: key '" + key + "': " + what);
}

} // namespace

bool is_builtin_scenario(const std::string& name) {
    return name == "example13" || name == "smalldata" || name == "degenerate";
}

Scenario builtin_scenario(const std::string& name) {
    Scenario sc;
    sc.name = name;
    if (name == "example13") {
        sc.kind = "closed_form_example";
        sc.delta = 1e-3;
        sc.support_radius = 10.0;
        sc.taper_width = 2.0;
        sc.diamond = {10.0, 10.0, 20.0};
        sc.notes = "linear solution 1 - delta((t-2)^2 + x^2 - 1) on the triangle Delta";
    } else if (name == "smalldata") {
        sc.kind = "builtin_smalldata";
        sc.support_radius = 6.0;
        sc.taper_width = 2.0;
        sc.diamond = {4.0, 4.0, 8.0};
        sc.notes = "gaussian data with sup|phi (lin)| < 0.5; never meets the barrier";
    } else if (name == "degenerate") {
        sc.kind = "builtin_degenerate";
        sc.support_radius = 6.0;
        sc.taper_width = 2.0;
        sc.diamond = {4.0, 4.0, 8.0};
        sc.notes = "left-moving pulse, (phi1 + phi0')/2 identically zero";
    } else {
        throw std::invalid_argument("unknown builtin scenario: " + name);
    }
    return sc;
}

InitialData make_initial_data(const Scenario& sc) {
    InitialData data = [&] {
        if (sc.kind == "closed_form_example") {
            if (!(sc.delta > 0.0)) config_error("initial.delta", "must be > 0");
            return example13_data(sc.delta, sc.support_radius, sc.taper_width);
        }
        if (sc.kind == "builtin_smalldata") {
            InitialData::ClosedForm f;
            f.phi0 = [](double x) { return 0.3 * std::exp(-x * x); };
            f.phi0_prime = [](double x) { return -0.6 * x * std::exp(-x * x); };
            f.phi0_second = [](double x) { return (1.2 * x * x - 0.6) * std::exp(-x * x); };
            f.phi1 = [](double x) { return 0.2 * std::exp(-x * x); };
            f.phi1_prime = [](double x) { return -0.4 * x * std::exp(-x * x); };
            return InitialData::from_closed_form(std::move(f), sc.support_radius, sc.taper_width);
        }
        if (sc.kind == "builtin_degenerate") {
            // phi1 = -phi0', so (phi1 + phi0')/2 vanishes identically
            InitialData::ClosedForm f;
            f.phi0 = [](double x) { return 0.8 * std::exp(-x * x); };
            f.phi0_prime = [](double x) { return -1.6 * x * std::exp(-x * x); };
            f.phi0_second = [](double x) { return (3.2 * x * x - 1.6) * std::exp(-x * x); };
            f.phi1 = [](double x) { return 1.6 * x * std::exp(-x * x); };
            f.phi1_prime = [](double x) { return 1.6 * (1.0 - 2.0 * x * x) * std::exp(-x * x); };
            return InitialData::from_closed_form(std::move(f), sc.support_radius, sc.taper_width);
        }
        if (sc.kind == "spline_samples") {
            std::vector<double> x = sc.samples_x, y0 = sc.samples_phi0, y1 = sc.samples_phi1;
            if (x.empty()) {
                if (sc.samples_path.empty())
                    config_error("initial.samples_path", "required for spline_samples");
                std::ifstream is(sc.samples_path);
                if (!is) config_error("initial.samples_path", "cannot open " + sc.samples_path);
                std::string line;
                if (!std::getline(is, line) || line.rfind("x,phi0,phi1", 0) != 0)
                    config_error("initial.samples_path", "missing 'x,phi0,phi1' header");
                while (std::getline(is, line)) {
                    if (line.empty()) continue;
                    std::istringstream ss(line);
                    double a, b, c;
                    char c1, c2;
                    if (!(ss >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',')
                        config_error("initial.samples_path", "malformed row: " + line);
                    x.push_back(a);
                    y0.push_back(b);
                    y1.push_back(c);
                }
            }
            if (x.size() < 4) config_error("initial.samples_path", "need at least 4 samples");
            return InitialData::from_samples(x, y0, y1, sc.support_radius, sc.taper_width);
        }
        config_error("initial.kind", "unknown kind '" + sc.kind + "'");
    }();
    data.require_barrier_condition();
    return data;
}

std::string scenario_canonical_json(const Scenario& sc) {
    ordered_json j;
    j["name"] = sc.name;
    ordered_json init;
    init["kind"] = sc.kind;
    if (sc.kind == "closed_form_example") init["delta"] = sc.delta;
    if (sc.kind == "spline_samples") {
        if (!sc.samples_path.empty()) init["samples_path"] = sc.samples_path;
        if (!sc.samples_x.empty()) {
            init["samples_x"] = sc.samples_x;
            init["samples_phi0"] = sc.samples_phi0;
            init["samples_phi1"] = sc.samples_phi1;
        }
    }
    init["support_radius"] = sc.support_radius;
    init["taper_width"] = sc.taper_width;
    j["initial"] = init;
    j["diamond"] = {{"u0", sc.diamond.u0}, {"v0", sc.diamond.v0}, {"r", sc.diamond.r}};
    j["notes"] = sc.notes;
    return j.dump(1);
}

void write_scenario(const Scenario& sc, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << scenario_canonical_json(sc) << '\n';
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("scenario file not found: " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("scenario config: invalid JSON in " + path.string() + ": " +
                                    e.what());
    }
    Scenario sc;
    if (!j.contains("name") || !j["name"].is_string()) config_error("name", "missing or not a string");
    sc.name = j["name"].get<std::string>();
    if (!j.contains("initial") || !j["initial"].is_object())
        config_error("initial", "missing or not an object");
    const auto& init = j["initial"];
    if (!init.contains("kind") || !init["kind"].is_string())
        config_error("initial.kind", "missing or not a string");
    sc.kind = init["kind"].get<std::string>();
    if (init.contains("delta")) {
        if (!init["delta"].is_number()) config_error("initial.delta", "not a number");
        sc.delta = init["delta"].get<double>();
    }
    if (init.contains("samples_path")) sc.samples_path = init["samples_path"].get<std::string>();
    if (init.contains("samples_x")) {
        sc.samples_x = init["samples_x"].get<std::vector<double>>();
        sc.samples_phi0 = init.at("samples_phi0").get<std::vector<double>>();
        sc.samples_phi1 = init.at("samples_phi1").get<std::vector<double>>();
    }
    if (!init.contains("support_radius") || !init["support_radius"].is_number())
        config_error("initial.support_radius", "missing or not a number");
    sc.support_radius = init["support_radius"].get<double>();
    if (!(sc.support_radius > 0.0)) config_error("initial.support_radius", "must be > 0");
    if (init.contains("taper_width")) {
        sc.taper_width = init["taper_width"].get<double>();
        if (!(sc.taper_width > 0.0)) config_error("initial.taper_width", "must be > 0");
    }
    if (j.contains("diamond")) {
        const auto& d = j["diamond"];
        for (const char* k : {"u0", "v0", "r"})
            if (!d.contains(k) || !d[k].is_number())
                config_error(std::string("diamond.") + k, "missing or not a number");
        sc.diamond = {d["u0"].get<double>(), d["v0"].get<double>(), d["r"].get<double>()};
        if (!(sc.diamond.r > 0.0)) config_error("diamond.r", "must be > 0");
    }
    if (j.contains("notes")) sc.notes = j["notes"].get<std::string>();

    make_initial_data(sc); // full validation, including the barrier condition
    return sc;
}

Scenario resolve_scenario(const std::string& name_or_path) {
    if (is_builtin_scenario(name_or_path)) return builtin_scenario(name_or_path);
    return parse_scenario(name_or_path);
}

SweepPlan parse_sweep_plan(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("sweep plan not found: " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("sweep plan: invalid JSON: " + std::string(e.what()));
    }
    SweepPlan plan;
    if (j.contains("scenario")) plan.scenario = j["scenario"].get<std::string>();
    if (j.contains("p_list")) plan.p_list = j["p_list"].get<std::vector<double>>();
    if (j.contains("diamond")) {
        const auto& d = j["diamond"];
        plan.diamond = {d.at("u0").get<double>(), d.at("v0").get<double>(),
                        d.at("r").get<double>()};
    }
    if (j.contains("triangle")) plan.triangle = j["triangle"].get<bool>();
    if (j.contains("lattice_n")) plan.lattice_n = j["lattice_n"].get<int>();
    if (j.contains("dx_rule")) plan.dx_rule = j["dx_rule"].get<std::string>();
    if (j.contains("dx_scale")) plan.dx_scale = j["dx_scale"].get<double>();
    if (j.contains("dx_fixed")) plan.dx_fixed = j["dx_fixed"].get<double>();
    if (j.contains("cfl")) plan.cfl = j["cfl"].get<double>();
    if (j.contains("workers")) plan.workers = j["workers"].get<int>();
    if (j.contains("apc_tau")) plan.apc_tau = j["apc_tau"].get<double>();
    if (j.contains("piecewise_eps")) plan.piecewise_eps = j["piecewise_eps"].get<double>();
    if (j.contains("seed")) plan.seed = j["seed"].get<std::uint64_t>();
    return plan;
}

void write_sweep_plan(const SweepPlan& plan, const std::filesystem::path& path) {
    ordered_json j;
    j["scenario"] = plan.scenario;
    j["p_list"] = plan.p_list;
    j["diamond"] = {{"u0", plan.diamond.u0}, {"v0", plan.diamond.v0}, {"r", plan.diamond.r}};
    j["triangle"] = plan.triangle;
    j["lattice_n"] = plan.lattice_n;
    j["dx_rule"] = plan.dx_rule;
    j["dx_scale"] = plan.dx_scale;
    j["dx_fixed"] = plan.dx_fixed;
    j["cfl"] = plan.cfl;
    j["workers"] = plan.workers;
    j["apc_tau"] = plan.apc_tau;
    j["piecewise_eps"] = plan.piecewise_eps;
    j["seed"] = plan.seed;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << j.dump(1) << '\n';
}

void write_run_metadata(const std::filesystem::path& out_dir, const std::string& command_line,
                        const std::string& canonical_config) {
    ordered_json j;
    j["command_line"] = command_line;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config)));
    j["config_hash"] = hash;
    j["tool_version"] = BWAVE_VERSION;
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    j["timestamp_utc"] = stamp;
    j["tolerances"] = {{"quadrature_abs_tol", 1e-10},
                       {"nondegeneracy_tol", 1e-9},
                       {"defect_mass_floor_per_h", 1e-12},
                       {"blowup_guard", "1 + 50/sqrt(p)"},
                       {"march_overshoot_cells", 10.0},
                       {"csv_significant_digits", 17}};
    std::filesystem::create_directories(out_dir);
    std::ofstream os(out_dir / "run_meta.json");
    if (!os) throw std::runtime_error("cannot write metadata in " + out_dir.string());
    os << j.dump(1) << '\n';
}

} // namespace bw
