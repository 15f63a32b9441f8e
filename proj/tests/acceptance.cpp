// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "bw/field_io.hpp"
#include "bw/limit.hpp"
#include "bw/linear_wave.hpp"
#include "bw/liouville.hpp"
#include "bw/nlw_solver.hpp"
#include "bw/numerics.hpp"
#include "bw/ode.hpp"
#include "bw/scenario.hpp"
#include "bw/sweep.hpp"

using namespace bw;

namespace {

int failures = 0;

void report(int criterion, const char* label, bool pass, const std::string& detail) {
    std::printf("[%2d] %s %-28s %s\n", criterion, pass ? "PASS" : "FAIL", label, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

struct OracleCompareSink {
    const NullLattice& lat;
    double delta;
    double sup = 0.0;

    void consider(int i, int j, double value) {
        const CartesianPoint c = lat.cart(i, j);
        if (c.t < 0.0) return;
        sup = std::max(sup, std::abs(value - example_oracle(c, delta).first));
    }
    void edge(int i, int j, double value) { consider(i, j, value); }
    void cell(int i, int j, double, double, double, double value, double, double) {
        consider(i, j, value);
    }
};

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const double delta = 1e-3;
    const InitialData data = example13_data(delta);
    NullLattice lat({10.0, 10.0, 20.0}, 10241); // h = 1/512 over Delta
    OracleCompareSink sink{lat, delta};
    march_limit(data, lat, sink);

    bool points_ok = true;
    const struct {
        CartesianPoint p;
        double expect;
    } tagged[] = {
        {{0.0, 0.0}, 0.997},    // region I
        {{1.1, 0.0}, 0.99981},  // region II
        {{1.6, -0.6}, 0.99948}, // region III
        {{1.6, 0.6}, 0.99948},  // region IV
        {{4.0, 0.0}, 0.995},    // region V
    };
    for (const auto& tc : tagged)
        points_ok = points_ok && std::abs(example_oracle(tc.p, delta).first - tc.expect) <= 1e-12;

    const bool pass = sink.sup <= 5e-4 && points_ok;
    report(1, "example-oracle equivalence", pass,
           fmt("sup err %.3e (tol 5e-4), closed-form points %s, %.1fs", sink.sup,
               points_ok ? "exact" : "MISMATCH", seconds_since(t0)));
}

// ------------------------------------------------------- criteria 2, 3, 4, 9

void criteria_sweep() {
    const auto t0 = std::chrono::steady_clock::now();
    const InitialData data = example13_data();
    SweepPlan plan; // defaults are the acceptance sweep
    plan.workers = 0;
    const ConvergenceReport rep = run_sweep(plan, data);
    const double elapsed = seconds_since(t0);

    std::printf("     sweep detail: p, sup_dist, C(p), max|phi_u/v|, max|phi_uu/vv|/p, "
                "apc, piece(len, comp)\n");
    for (const auto& m : rep.per_p)
        std::printf("       p=%4.0f  %.4e  %+.3f  %.4e  %.4e  %.3f  (%.3f, %d)%s\n", m.p,
                    m.sup_distance_to_limit, m.barrier_excess, m.max_first_null_deriv,
                    m.max_second_null_deriv_over_p, m.apc_residual, m.piece_bad_length,
                    m.piece_components, m.blowup ? "  BLOWUP" : "");
    std::printf("     fitted log-log rate vs log(p)/p: %.3f\n", rep.fitted_rate);

    bool solved = true;
    for (const auto& m : rep.per_p) solved = solved && !m.blowup;

    // criterion 2: monotone distances (one inversion allowed at the coarsest
    // p) and a factor-4 drop from p = 15 to p = 255
    int inversions = 0;
    bool inversion_at_smallest = true;
    for (std::size_t k = 0; k + 1 < rep.per_p.size(); ++k) {
        if (rep.per_p[k + 1].sup_distance_to_limit >
            rep.per_p[k].sup_distance_to_limit * (1.0 + 1e-12)) {
            ++inversions;
            if (k != 0) inversion_at_smallest = false;
        }
    }
    const double d15 = rep.per_p.front().sup_distance_to_limit;
    const double d255 = rep.per_p.back().sup_distance_to_limit;
    const bool c2 = solved && (inversions == 0 || (inversions == 1 && inversion_at_smallest)) &&
                    d255 <= 0.25 * d15;
    report(2, "convergence sweep", c2,
           fmt("inversions %d, d(255)/d(15) = %.3f (tol 0.25), %.0fs", inversions,
               d255 / d15, elapsed));

    // criterion 3: barrier constant C(p) <= C(15) + 2
    bool c3 = solved;
    for (const auto& m : rep.per_p) c3 = c3 && m.barrier_excess <= rep.per_p.front().barrier_excess + 2.0;
    report(3, "barrier bound", c3,
           fmt("C(p) in [%.3f, %.3f], C(15)+2 = %.3f",
               std::min_element(rep.per_p.begin(), rep.per_p.end(),
                                [](auto& a, auto& b) { return a.barrier_excess < b.barrier_excess; })
                   ->barrier_excess,
               std::max_element(rep.per_p.begin(), rep.per_p.end(),
                                [](auto& a, auto& b) { return a.barrier_excess < b.barrier_excess; })
                   ->barrier_excess,
               rep.per_p.front().barrier_excess + 2.0));

    // criterion 4: first/second derivative maxima stable within factor 3
    auto minmax = [&](auto get) {
        double lo = 1e300, hi = -1e300;
        for (const auto& m : rep.per_p) {
            lo = std::min(lo, get(m));
            hi = std::max(hi, get(m));
        }
        return std::pair{lo, hi};
    };
    const auto [f_lo, f_hi] = minmax([](const PerPMetrics& m) { return m.max_first_null_deriv; });
    const auto [s_lo, s_hi] =
        minmax([](const PerPMetrics& m) { return m.max_second_null_deriv_over_p; });
    const bool c4 = solved && f_hi <= 3.0 * f_lo && s_hi <= 3.0 * s_lo;
    report(4, "derivative bounds", c4,
           fmt("|phi_u| ratio %.2f, |phi_uu|/p ratio %.2f (tol 3)", f_hi / f_lo, s_hi / s_lo));

    // criterion 9: fitted APC constants and exceptional sets, anchored at the
    // smallest p (upper stability within factor 3)
    const double apc0 = rep.per_p.front().apc_residual;
    bool apc_ok = solved;
    double apc_ratio_max = 0.0;
    for (const auto& m : rep.per_p) {
        apc_ok = apc_ok && m.apc_residual <= 3.0 * apc0;
        if (apc0 > 0.0) apc_ratio_max = std::max(apc_ratio_max, m.apc_residual / apc0);
    }
    const double len0 = rep.per_p.front().piece_bad_length * rep.per_p.front().p /
                        std::log(rep.per_p.front().p);
    bool piece_ok = solved;
    double len_ratio_max = 0.0;
    int comp_max = 0;
    for (const auto& m : rep.per_p) {
        comp_max = std::max(comp_max, m.piece_components);
        piece_ok = piece_ok && m.piece_components <= 10;
        const double c_len = m.piece_bad_length * m.p / std::log(m.p);
        len_ratio_max = std::max(len_ratio_max, len0 > 0.0 ? c_len / len0 : 0.0);
        piece_ok = piece_ok && c_len <= 3.0 * len0;
    }
    report(9, "approximate conservation", apc_ok && piece_ok,
           fmt("apc C(p)/C(15) max %.2f, length C(p)/C(15) max %.2f, components max %d (tol 10)",
               apc_ratio_max, len_ratio_max, comp_max));
}

// ---------------------------------------------------------------- criterion 5

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const InitialData data = example13_data();
    NullLattice lat({10.0, 10.0, 20.0}, 2561); // h = 1/128
    const LimitResult res = construct_limit(data, lat);
    const PropertyReport rep = check_properties(res.state.phi, data);
    const double h = lat.h();
    const double tol_median = 2.0 * h * rep.lipschitz_constant;
    const bool median_ok = rep.reflection_error_median <= tol_median;
    const bool fraction_ok = rep.reflection_error_fraction_bad <= 0.01;

    // negative control: the naive clamp of the linear solution must fail
    std::vector<double> un(lat.n()), vn(lat.n());
    for (int i = 0; i < lat.n(); ++i) un[i] = lat.u(i);
    for (int j = 0; j < lat.n(); ++j) vn[j] = lat.v(j);
    const auto F = dalembert_profile_u(data, un);
    const auto G = dalembert_profile_v(data, vn);
    Field2D clamped(lat);
    for (int i = 0; i < lat.n(); ++i)
        for (int j = 0; j < lat.n(); ++j) clamped.at(i, j) = std::min(F[i] + G[j], 1.0);
    const PropertyReport bad = check_properties(clamped, data);
    const bool control_fails = bad.reflection_error_fraction_bad > 0.01;

    report(5, "null energy reflection", median_ok && fraction_ok && control_fails,
           fmt("median %.2e (tol %.2e), frac bad %.4f%% (tol 1%%), clamp control frac %.2f%%, "
               "%.1fs",
               rep.reflection_error_median, tol_median,
               100.0 * rep.reflection_error_fraction_bad,
               100.0 * bad.reflection_error_fraction_bad, seconds_since(t0)));
}

// ---------------------------------------------------------------- criterion 6

struct DefectStatsSink {
    const NullLattice& lat;
    double total_plus = 0.0;
    double total_minus = 0.0;
    double min_mass = 0.0;
    double lip = 0.0;            // max |edge increment| / h over the lattice
    double support_deficit = 0.0; // max over mass cells of 1 - max(corner)
    double prev_edge = 0.0;

    void edge(int, int, double) {}
    void cell(int, int, double sw, double nw, double se, double value, double mp, double mm) {
        const double h = lat.h();
        lip = std::max(lip, std::abs(value - nw) / h);
        lip = std::max(lip, std::abs(value - se) / h);
        if (mp != 0.0) {
            total_plus += mp;
            min_mass = std::min(min_mass, mp);
            const double top = std::max(std::max(sw, nw), std::max(se, value));
            support_deficit = std::max(support_deficit, 1.0 - top);
        }
        if (mm != 0.0) {
            total_minus += mm;
            min_mass = std::min(min_mass, mm);
        }
    }
};

void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const double delta = 1e-3;
    const InitialData data = example13_data(delta);
    NullLattice lat({10.0, 10.0, 20.0}, 20481); // h = 1/1024
    DefectStatsSink sink{lat};
    march_limit(data, lat, sink);

    // independent route: line integral of the flip density along the arc
    const int m = 65536;
    double integral = 0.0;
    for (int k = 0; k < m; ++k) {
        const double th = -M_PI / 4.0 + M_PI / 2.0 * (k + 0.5) / m;
        const double dth = M_PI / 2.0 / m;
        const double t = 2.0 - std::cos(th), x = std::sin(th);
        const NullPoint q = to_null({t, x});
        integral += std::abs(lin_deriv_u(data, q.u)) * std::abs(std::sin(th) + std::cos(th)) * dth +
                    std::abs(lin_deriv_v(data, q.v)) * std::abs(std::sin(th) - std::cos(th)) * dth;
    }

    const double rel = std::abs(sink.total_plus - integral) / integral;
    const bool pass = sink.min_mass >= -1e-12 && sink.total_minus == 0.0 &&
                      sink.support_deficit <= 4.0 * lat.h() * sink.lip && rel <= 0.02;
    report(6, "defect measure", pass,
           fmt("mu+ %.6e vs arc integral %.6e (rel %.4f, tol 0.02), mu- %.1e, min %.1e, "
               "support deficit %.2e <= %.2e, %.1fs",
               sink.total_plus, integral, rel, sink.total_minus, sink.min_mass,
               sink.support_deficit, 4.0 * lat.h() * sink.lip, seconds_since(t0)));
}

// ---------------------------------------------------------------- criterion 7

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();

    // (a) symplectic energy drift
    const OdeTrajectory traj = integrate_ode(200.0, 0.0, 1.0, 10.0, 1e-4);
    const double drift =
        std::abs(traj.hamiltonian.back() - traj.hamiltonian.front()) / traj.hamiltonian.front();
    const bool a_ok = drift <= 1e-8;

    // (b) sup distance to the ideal sawtooth at p = 400 on [0, 10]
    const OdeTrajectory t400 = integrate_ode(400.0, 0.0, 1.0, 10.0, 1.0 / (8.0 * 400.0));
    double saw_sup = 0.0;
    for (std::size_t k = 0; k < t400.size(); ++k)
        saw_sup = std::max(saw_sup, std::abs(t400.phi[k] - sawtooth_limit(0.0, 1.0, t400.t[k])));
    const bool b_ok = saw_sup <= 0.05;

    // (c) reflection-layer match to the finite-p profile
    bool c_ok = true;
    double c_worst_rel = 0.0;
    for (double p : {100.0, 200.0, 400.0}) {
        const OdeTrajectory tr = integrate_ode(p, 0.0, 1.0, 2.0, 1.0 / (16.0 * p));
        ReflectionProfile prof;
        prof.t0 = extract_reflection_time(tr);
        prof.a = 0.5 * extract_reflection_speed(tr, prof.t0);
        double worst = 0.0;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            if (std::abs(tr.t[k] - prof.t0) > 10.0 / p) continue;
            worst = std::max(worst, std::abs(tr.phi[k] - phip_profile(p, prof, tr.t[k])));
        }
        c_ok = c_ok && worst <= 3.0 / p;
        c_worst_rel = std::max(c_worst_rel, worst * p / 3.0);
    }

    report(7, "ODE suite", a_ok && b_ok && c_ok,
           fmt("(a) drift %.1e (tol 1e-8) %s; (b) sawtooth sup %.3f (tol 0.05) %s; "
               "(c) profile match %.2f of budget %s; %.1fs",
               drift, a_ok ? "ok" : "FAIL", saw_sup, b_ok ? "ok" : "FAIL", c_worst_rel,
               c_ok ? "ok" : "FAIL", seconds_since(t0)));
}

// ---------------------------------------------------------------- criterion 8

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const Diamond patch{0.0, 0.0, 1.0};
    auto sample = [&](const LiouvilleSolution& s, int n) {
        NullLattice lat(patch, n);
        return Field2D::sample(lat, [&](NullPoint q) { return liouville_eval(s, q); });
    };

    const double r129 = liouville_residual(sample(exp_family(1.0), 129));
    const double r257 = liouville_residual(sample(exp_family(1.0), 257));
    const double ratio = r129 / r257;
    const bool exp_ok = r129 <= 1e-4 && ratio >= 3.0 && ratio <= 5.0;

    bool lorentz_ok = true;
    double lorentz_worst = 0.0;
    for (double speed : {0.0, 0.3, -0.3, 0.9, -0.9}) {
        const LorentzProfile prof{1.0, speed, 0.0, 0.0};
        NullLattice lat({0.5, 0.5, 1.0}, 129);
        const Field2D f =
            Field2D::sample(lat, [&](NullPoint q) { return lorentz_eval(prof, to_cartesian(q)); });
        const double r = liouville_residual(f);
        lorentz_worst = std::max(lorentz_worst, r);
        lorentz_ok = lorentz_ok && r <= 1e-4;
    }

    const auto [cu129, cv129] = conservation_residual(sample(exp_family(1.0), 129));
    const auto [cu257, cv257] = conservation_residual(sample(exp_family(1.0), 257));
    NullLattice lat129(patch, 129);
    const Field2D nonsol =
        Field2D::sample(lat129, [](NullPoint q) { return q.u * q.u * q.v; });
    const auto [bu, bv] = conservation_residual(nonsol);
    const bool cons_ok = cu257 < cu129 && cv257 < cv129 && bu >= 0.1;

    double ident_worst = 0.0;
    const LiouvilleSolution efam = exp_family(0.85, 0.2);
    for (int k = 0; k <= 100; ++k) {
        const double t = -1.0 + 0.02 * k, x = 0.37 - 0.005 * k;
        ident_worst = std::max(ident_worst,
                               std::abs(liouville_eval(efam, to_null({t, x})) -
                                        liouville_ode_profile({0.85, 0.2, 0.0}, t)));
    }
    const bool ident_ok = ident_worst <= 1e-12;

    report(8, "Liouville oracle suite", exp_ok && lorentz_ok && cons_ok && ident_ok,
           fmt("residual %.2e ratio %.2f, lorentz worst %.2e, conservation %.2e -> %.2e "
               "(control %.2f), identity %.1e, %.1fs",
               r129, ratio, lorentz_worst, cu129, cu257, bu, ident_worst, seconds_since(t0)));
}

// --------------------------------------------------------------- criterion 10

void criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    const InitialData data = example13_data();

    // determinism: identical reruns byte-for-byte
    auto run_once = [&] {
        NullLattice lat({2.0, 2.0, 4.0}, 513);
        const LimitResult res = construct_limit(data, lat);
        std::stringstream ss;
        write_field_csv(res.state.phi, ss);
        SolveOptions opts;
        opts.t_min_clip = 0.0;
        const DiamondSolution sol = solve_on_diamond(data, 63.0, {1.2, 1.2, 0.8}, 65, 1e-3, opts);
        write_field_csv(sol.field, ss);
        for (std::size_t k = 0; k < sol.trace.times.size(); ++k)
            ss << format_double(sol.trace.total_energy[k]) << ','
               << format_double(sol.trace.local_energy[k]) << '\n';
        return ss.str();
    };
    const std::string once = run_once();
    const std::string twice = run_once();
    const bool det_ok = once == twice;

    // refinement: h and h/2 limits within 4 h Lip on shared nodes
    NullLattice coarse({4.0, 4.0, 6.0}, 769);
    NullLattice fine({4.0, 4.0, 6.0}, 1537);
    const LimitResult a = construct_limit(data, coarse);
    const LimitResult b = construct_limit(data, fine);
    double lip = 0.0;
    for (int i = 1; i < coarse.n(); ++i) lip = std::max(lip, a.state.du_mag[i]);
    for (int j = 1; j < coarse.n(); ++j) lip = std::max(lip, a.state.dv_mag[j]);
    double worst = 0.0;
    for (int i = 0; i < coarse.n(); ++i)
        for (int j = 0; j < coarse.n(); ++j)
            worst = std::max(worst, std::abs(a.state.phi(i, j) - b.state.phi(2 * i, 2 * j)));
    const double tol = 4.0 * coarse.h() * lip;
    const bool refine_ok = worst <= tol;

    report(10, "determinism and refinement", det_ok && refine_ok,
           fmt("rerun %s, |phi_h - phi_h/2| %.2e (tol %.2e), %.1fs",
               det_ok ? "bit-identical" : "DIFFERS", worst, tol, seconds_since(t0)));
}

} // namespace

int main() {
    std::printf("barrier-wave acceptance suite\n");
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criteria_sweep(); // criteria 2, 3, 4 and 9
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_10();
    std::printf("%d criterion failure(s), total %.0fs\n", failures, seconds_since(t0));
    return failures;
}
