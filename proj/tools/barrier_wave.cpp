// barrier-wave: simulate the defocusing NLW at large p, build its p -> inf
// limit by characteristic marching, and run the verification suites.
//
// Subcommands: simulate | limit | ode | liouville | sweep | check
// Exit codes: 0 success, 1 domain/runtime error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bw/field_io.hpp"
#include "bw/limit.hpp"
#include "bw/linear_wave.hpp"
#include "bw/liouville.hpp"
#include "bw/nlw_solver.hpp"
#include "bw/numerics.hpp"
#include "bw/ode.hpp"
#include "bw/scenario.hpp"
#include "bw/sweep.hpp"
#include "bw/version.hpp"

namespace fs = std::filesystem;
using bw::format_double;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

bw::Diamond parse_diamond(const std::string& spec) {
    std::istringstream ss(spec);
    double u0, v0, r;
    char c1, c2;
    if (!(ss >> u0 >> c1 >> v0 >> c2 >> r) || c1 != ',' || c2 != ',' || !(r > 0))
        throw CLI::ValidationError("--diamond", "expected u0,v0,r with r > 0");
    return {u0, v0, r};
}

int effective_workers(int cli_workers) {
    if (const char* env = std::getenv("BARRIER_WAVE_WORKERS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (...) {
            throw std::invalid_argument("BARRIER_WAVE_WORKERS is not an integer");
        }
    }
    return cli_workers;
}

void write_energy_csv(const bw::EnergyTrace& trace, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << "t,total,local\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        os << format_double(trace.times[k]) << ',' << format_double(trace.total_energy[k]) << ','
           << format_double(trace.local_energy[k]) << '\n';
}

void write_defect_csv(const bw::DefectMeasure& df, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << "u_cell,v_cell,mu_plus,mu_minus\n";
    const int c = df.cells();
    const double h = df.lattice.h();
    for (int ci = 0; ci < c; ++ci)
        for (int cj = 0; cj < c; ++cj) {
            const double mp = df.plus(ci, cj), mm = df.minus(ci, cj);
            if (mp == 0.0 && mm == 0.0) continue;
            os << format_double(df.lattice.u(ci) + 0.5 * h) << ','
               << format_double(df.lattice.v(cj) + 0.5 * h) << ',' << format_double(mp) << ','
               << format_double(mm) << '\n';
        }
}

ordered_json report_json(const bw::PropertyReport& rep) {
    return ordered_json{{"lipschitz_constant", rep.lipschitz_constant},
                        {"piecewise_segments_max", rep.piecewise_segments_max},
                        {"initial_agreement_error", rep.initial_agreement_error},
                        {"t_lin", rep.t_lin},
                        {"barrier_violation", rep.barrier_violation},
                        {"defect_negativity", rep.defect_negativity},
                        {"defect_support_distance", rep.defect_support_distance},
                        {"reflection_error_median", rep.reflection_error_median},
                        {"reflection_error_p95", rep.reflection_error_p95},
                        {"reflection_error_fraction_bad", rep.reflection_error_fraction_bad}};
}

struct SimulateArgs {
    std::string scenario;
    double p = 63.0;
    double dx = 1e-3;
    double cfl = 0.5;
    std::string diamond;
    int n = 257;
    bool triangle = false;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a, const std::string& cmdline) {
    bw::Scenario sc = bw::resolve_scenario(a.scenario);
    if (!a.diamond.empty()) sc.diamond = parse_diamond(a.diamond);
    bw::InitialData data = bw::make_initial_data(sc);
    bw::SolveOptions opts;
    opts.cfl = a.cfl;
    if (a.triangle) opts.t_min_clip = 0.0;
    bw::DiamondSolution sol = bw::solve_on_diamond(data, a.p, sc.diamond, a.n, a.dx, opts);

    fs::create_directories(a.out);
    bw::write_field_csv(sol.field, fs::path(a.out) / "field.csv");
    write_energy_csv(sol.trace, fs::path(a.out) / "energy.csv");
    ordered_json stats{{"p", a.p},
                       {"dx", a.dx},
                       {"cfl", a.cfl},
                       {"steps", sol.stats.steps},
                       {"max_abs_phi", sol.stats.max_abs_phi},
                       {"max_phi_u", sol.stats.max_phi_u},
                       {"max_phi_v", sol.stats.max_phi_v},
                       {"max_phi_uu", sol.stats.max_phi_uu},
                       {"max_phi_vv", sol.stats.max_phi_vv}};
    std::ofstream(fs::path(a.out) / "diagnostics.json") << stats.dump(1) << '\n';
    bw::write_run_metadata(a.out, cmdline,
                           bw::scenario_canonical_json(sc) + "|p=" + format_double(a.p) +
                               "|dx=" + format_double(a.dx));
    return 0;
}

struct LimitArgs {
    std::string scenario;
    std::string diamond;
    int n = 513;
    std::string out;
    std::string oracle;
    double delta = 1e-3;
    std::string check_field;
};

int cmd_limit(const LimitArgs& a, const std::string& cmdline) {
    if (!a.check_field.empty()) {
        bw::Scenario sc = bw::resolve_scenario(a.scenario);
        bw::InitialData data = bw::make_initial_data(sc);
        bw::Field2D field = bw::read_field_csv(a.check_field);
        const bw::PropertyReport rep = bw::check_properties(field, data);
        const ordered_json j = report_json(rep);
        if (!a.out.empty()) {
            fs::create_directories(a.out);
            std::ofstream(fs::path(a.out) / "properties.json") << j.dump(1) << '\n';
            bw::write_run_metadata(a.out, cmdline, bw::scenario_canonical_json(sc));
        }
        std::cout << j.dump(1) << '\n';
        return 0;
    }

    if (!a.oracle.empty()) {
        if (a.oracle != "example")
            throw std::invalid_argument("limit --oracle: only 'example' is available");
        bw::Diamond d = a.diamond.empty() ? bw::Diamond{10.0, 10.0, 20.0} : parse_diamond(a.diamond);
        bw::NullLattice lat(d, a.n);
        // Below t = 0 the example limit is the linear solution (region I form).
        bw::Field2D field = bw::Field2D::sample(lat, [&](bw::NullPoint q) {
            const bw::CartesianPoint c = bw::to_cartesian(q);
            if (c.t >= 0.0) return bw::example_oracle(c, a.delta).first;
            const double quad = (c.t - 2.0) * (c.t - 2.0) + c.x * c.x;
            return 1.0 - a.delta * (quad - 1.0);
        });
        fs::create_directories(a.out);
        bw::write_field_csv(field, fs::path(a.out) / "field.csv");
        bw::write_run_metadata(a.out, cmdline, "oracle|delta=" + format_double(a.delta));
        return 0;
    }

    bw::Scenario sc = bw::resolve_scenario(a.scenario);
    if (!a.diamond.empty()) sc.diamond = parse_diamond(a.diamond);
    bw::InitialData data = bw::make_initial_data(sc);
    bw::NullLattice lat(sc.diamond, a.n);
    bw::LimitResult res = bw::construct_limit(data, lat);
    const bw::PropertyReport rep = bw::check_properties(res.state.phi, data);

    fs::create_directories(a.out);
    bw::write_field_csv(res.state.phi, fs::path(a.out) / "field.csv");
    write_defect_csv(res.defect, fs::path(a.out) / "defect.csv");
    std::ofstream(fs::path(a.out) / "properties.json") << report_json(rep).dump(1) << '\n';
    bw::write_run_metadata(a.out, cmdline, bw::scenario_canonical_json(sc));
    return 0;
}

struct OdeArgs {
    double p = 200.0;
    double phi0 = 0.0;
    double phi1 = 1.0;
    double t_end = 10.0;
    double dt = 1e-4;
    std::string out;
};

int cmd_ode(const OdeArgs& a, const std::string& cmdline) {
    const bw::OdeTrajectory traj = bw::integrate_ode(a.p, a.phi0, a.phi1, a.t_end, a.dt);
    std::ofstream os(a.out);
    if (!os) throw std::runtime_error("cannot open for writing: " + a.out);
    os << "t,phi,phi_t,hamiltonian\n";
    for (std::size_t k = 0; k < traj.size(); ++k)
        os << format_double(traj.t[k]) << ',' << format_double(traj.phi[k]) << ','
           << format_double(traj.phi_t[k]) << ',' << format_double(traj.hamiltonian[k]) << '\n';
    os.close();
    const fs::path dir = fs::path(a.out).has_parent_path() ? fs::path(a.out).parent_path() : ".";
    bw::write_run_metadata(dir, cmdline,
                           "ode|p=" + format_double(a.p) + "|phi0=" + format_double(a.phi0) +
                               "|phi1=" + format_double(a.phi1) + "|dt=" + format_double(a.dt));
    return 0;
}

struct LiouvilleArgs {
    std::string family = "exp";
    double a = 1.0;
    double t0 = 0.0;
    std::string diamond = "0,0,1";
    int n = 129;
    std::string out;
    std::string check;
    std::string in;
};

int cmd_liouville(const LiouvilleArgs& a, const std::string& cmdline) {
    if (!a.check.empty()) {
        if (a.in.empty()) throw std::invalid_argument("liouville --check requires --in <field.csv>");
        const bw::Field2D field = bw::read_field_csv(a.in);
        ordered_json j;
        if (a.check == "residual") {
            j["residual"] = bw::liouville_residual(field);
        } else if (a.check == "conservation") {
            const auto [ru, rv] = bw::conservation_residual(field);
            j["conservation_residual_u"] = ru;
            j["conservation_residual_v"] = rv;
            j["conserved_u_variation"] = bw::conserved_u_variation(field);
        } else {
            throw std::invalid_argument("liouville --check: expected 'residual' or 'conservation'");
        }
        std::cout << j.dump(1) << '\n';
        return 0;
    }

    bw::LiouvilleSolution sol = [&] {
        if (a.family == "exp") return bw::exp_family(a.a, a.t0);
        if (a.family == "rational") return bw::rational_family();
        throw std::invalid_argument("liouville --family: expected 'exp' or 'rational'");
    }();
    bw::NullLattice lat(parse_diamond(a.diamond), a.n);
    bw::Field2D field =
        bw::Field2D::sample(lat, [&](bw::NullPoint q) { return bw::liouville_eval(sol, q); });
    const fs::path out(a.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    bw::write_field_csv(field, out);
    const fs::path dir = out.has_parent_path() ? out.parent_path() : ".";
    bw::write_run_metadata(dir, cmdline, "liouville|family=" + a.family + "|a=" + format_double(a.a));
    return 0;
}

struct SweepArgs {
    std::string plan;
    int workers = 0;
    std::string out;
};

int cmd_sweep(const SweepArgs& a, const std::string& cmdline) {
    bw::SweepPlan plan = bw::parse_sweep_plan(a.plan);
    plan.workers = effective_workers(a.workers > 0 ? a.workers : plan.workers);
    const bw::Scenario sc = bw::resolve_scenario(plan.scenario);
    const bw::InitialData data = bw::make_initial_data(sc);

    fs::create_directories(a.out);
    auto on_field = [&](const bw::PerPMetrics& m, const bw::Field2D& f) {
        char name[64];
        std::snprintf(name, sizeof(name), "field_p%g.csv", m.p);
        bw::write_field_csv(f, fs::path(a.out) / name);
    };
    const bw::ConvergenceReport rep = bw::run_sweep(plan, data, nullptr, on_field);

    std::ofstream csv(fs::path(a.out) / "summary.csv");
    csv << "p,dx,sup_distance,barrier_excess,max_first_null_deriv,max_second_null_deriv_over_p,"
           "apc_residual,piece_bad_length,piece_components,holder_constant,energy_drift_rel,"
           "blowup\n";
    ordered_json jp = ordered_json::array();
    for (const auto& m : rep.per_p) {
        csv << format_double(m.p) << ',' << format_double(m.dx) << ','
            << format_double(m.sup_distance_to_limit) << ',' << format_double(m.barrier_excess)
            << ',' << format_double(m.max_first_null_deriv) << ','
            << format_double(m.max_second_null_deriv_over_p) << ','
            << format_double(m.apc_residual) << ',' << format_double(m.piece_bad_length) << ','
            << m.piece_components << ',' << format_double(m.holder_constant) << ','
            << format_double(m.energy_drift_rel) << ',' << (m.blowup ? 1 : 0) << '\n';
        jp.push_back(ordered_json{{"p", m.p},
                                  {"dx", m.dx},
                                  {"sup_distance_to_limit", m.sup_distance_to_limit},
                                  {"barrier_excess", m.barrier_excess},
                                  {"max_first_null_deriv", m.max_first_null_deriv},
                                  {"max_second_null_deriv_over_p", m.max_second_null_deriv_over_p},
                                  {"apc_residual", m.apc_residual},
                                  {"piece_bad_length", m.piece_bad_length},
                                  {"piece_components", m.piece_components},
                                  {"piece_degenerate_deriv", m.piece_degenerate_deriv},
                                  {"piece_degenerate_second", m.piece_degenerate_second},
                                  {"holder_constant", m.holder_constant},
                                  {"energy_drift_rel", m.energy_drift_rel},
                                  {"blowup", m.blowup},
                                  {"error", m.error}});
    }
    ordered_json j{{"scenario", plan.scenario}, {"fitted_rate", rep.fitted_rate}, {"per_p", jp}};
    std::ofstream(fs::path(a.out) / "report.json") << j.dump(1) << '\n';

    std::ifstream plan_file(a.plan);
    std::stringstream plan_text;
    plan_text << plan_file.rdbuf();
    bw::write_run_metadata(a.out, cmdline, plan_text.str());
    return 0;
}

struct CheckArgs {
    std::string field;
    std::string scenario;
    std::string report;
};

int cmd_check(const CheckArgs& a, const std::string& cmdline) {
    const bw::Scenario sc = bw::resolve_scenario(a.scenario);
    const bw::InitialData data = bw::make_initial_data(sc);
    const bw::Field2D field = bw::read_field_csv(a.field);
    const ordered_json j = report_json(bw::check_properties(field, data));
    if (!a.report.empty()) {
        std::ofstream(a.report) << j.dump(1) << '\n';
        const fs::path dir =
            fs::path(a.report).has_parent_path() ? fs::path(a.report).parent_path() : ".";
        bw::write_run_metadata(dir, cmdline, bw::scenario_canonical_json(sc));
    }
    std::cout << j.dump(1) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"barrier-wave: high-exponent nonlinear wave laboratory"};
    app.set_version_flag("--version", BWAVE_VERSION);
    app.require_subcommand(0, 1);
    const std::string cmdline = join_args(argc, argv);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "run the NLW(p) solver over a diamond");
    c_sim->add_option("--scenario", sim.scenario, "builtin name or scenario file")->required();
    c_sim->add_option("--p", sim.p, "nonlinearity exponent")->required();
    c_sim->add_option("--dx", sim.dx, "grid spacing")->required();
    c_sim->add_option("--cfl", sim.cfl, "CFL number (default 0.5)");
    c_sim->add_option("--diamond", sim.diamond, "u0,v0,r (default: scenario diamond)");
    c_sim->add_option("--n", sim.n, "lattice samples per side");
    c_sim->add_flag("--triangle", sim.triangle, "solve only t >= 0");
    c_sim->add_option("--out", sim.out, "output directory")->required();

    LimitArgs lim;
    auto* c_lim = app.add_subcommand("limit", "construct or certify the p -> inf limit field");
    c_lim->add_option("--scenario", lim.scenario, "builtin name or scenario file");
    c_lim->add_option("--diamond", lim.diamond, "u0,v0,r");
    c_lim->add_option("--n", lim.n, "lattice samples per side");
    c_lim->add_option("--out", lim.out, "output directory");
    c_lim->add_option("--oracle", lim.oracle, "emit a closed-form oracle ('example')");
    c_lim->add_option("--delta", lim.delta, "oracle delta (default 1e-3)");
    c_lim->add_option("--check", lim.check_field, "certify an existing field CSV");

    OdeArgs ode;
    auto* c_ode = app.add_subcommand("ode", "integrate the ODE model -phi_tt = |phi|^{p-1} phi");
    c_ode->add_option("--p", ode.p)->required();
    c_ode->add_option("--phi0", ode.phi0)->required();
    c_ode->add_option("--phi1", ode.phi1)->required();
    c_ode->add_option("--t-end", ode.t_end)->required();
    c_ode->add_option("--dt", ode.dt)->required();
    c_ode->add_option("--out", ode.out, "output CSV")->required();

    LiouvilleArgs lio;
    auto* c_lio = app.add_subcommand("liouville", "closed-form Liouville solutions and checks");
    c_lio->add_option("--family", lio.family, "exp | rational");
    c_lio->add_option("--a", lio.a, "profile speed (exp family)");
    c_lio->add_option("--t0", lio.t0, "profile center (exp family)");
    c_lio->add_option("--diamond", lio.diamond, "u0,v0,r");
    c_lio->add_option("--n", lio.n, "lattice samples per side");
    c_lio->add_option("--out", lio.out, "output field CSV");
    c_lio->add_option("--check", lio.check, "residual | conservation");
    c_lio->add_option("--in", lio.in, "input field CSV for --check");

    SweepArgs swp;
    auto* c_swp = app.add_subcommand("sweep", "p-sweep with convergence and a priori metrics");
    c_swp->add_option("--plan", swp.plan, "sweep plan JSON")->required();
    c_swp->add_option("--workers", swp.workers, "parallel p-jobs (env BARRIER_WAVE_WORKERS wins)");
    c_swp->add_option("--out", swp.out, "output directory")->required();

    CheckArgs chk;
    auto* c_chk = app.add_subcommand("check", "certify a field CSV against a scenario");
    c_chk->add_option("--field", chk.field, "field CSV")->required();
    c_chk->add_option("--scenario", chk.scenario, "builtin name or scenario file")->required();
    c_chk->add_option("--report", chk.report, "also write the report JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 2;
    }

    try {
        if (c_sim->parsed()) return cmd_simulate(sim, cmdline);
        if (c_lim->parsed()) return cmd_limit(lim, cmdline);
        if (c_ode->parsed()) return cmd_ode(ode, cmdline);
        if (c_lio->parsed()) return cmd_liouville(lio, cmdline);
        if (c_swp->parsed()) return cmd_sweep(swp, cmdline);
        if (c_chk->parsed()) return cmd_check(chk, cmdline);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 2;
}
