#include "bw/sweep.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "bw/linear_wave.hpp"

namespace bw {

double SweepPlan::dx_for(double p) const {
    if (dx_rule == "scaled") return 1.0 / (dx_scale * p);
    if (dx_rule == "fixed") return dx_fixed;
    throw std::invalid_argument("SweepPlan: dx_rule must be 'scaled' or 'fixed'");
}

double check_apc(const Field2D& f, double p, double tau) {
    const int n = f.n();
    if (n < 5) throw std::invalid_argument("check_apc: lattice too small");
    if (!(tau > 0.0)) throw std::invalid_argument("check_apc: tau must be > 0");
    const double h = f.h();
    const int w = std::max(1, static_cast<int>(std::floor(tau / h)));

    double worst = 0.0;
    std::vector<double> q_minus(n), q_plus(n);
    std::vector<char> ok_minus(n), ok_plus(n);
    for (int i = 1; i + 1 < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double du = (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
            const double duu = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (h * h);
            q_minus[j] = 0.5 * du * du - duu / p;
            q_plus[j] = 0.5 * du * du + duu / p;
            ok_minus[j] = f(i, j) >= -0.5;
            ok_plus[j] = f(i, j) <= 0.5;
        }
        auto scan = [&](const std::vector<double>& q, const std::vector<char>& ok) {
            for (int j0 = 0; j0 < n; ++j0) {
                if (!ok[j0]) continue;
                const int hi = std::min(n - 1, j0 + w);
                for (int j = j0 + 1; j <= hi; ++j) {
                    if (!ok[j]) continue;
                    worst = std::max(worst, std::abs(q[j] - q[j0]));
                }
            }
        };
        scan(q_minus, ok_minus);
        scan(q_plus, ok_plus);
    }
    return worst / (std::log(p) / p);
}

PiecewiseReport check_piecewise_lemma(const Field2D& f, const InitialData& data, double eps,
                                      double p) {
    const int n = f.n();
    if (n < 5) throw std::invalid_argument("check_piecewise_lemma: lattice too small");
    if (!(eps > 0.0)) throw std::invalid_argument("check_piecewise_lemma: eps must be > 0");
    const double h = f.h();
    const NullLattice& lat = f.lattice();

    std::vector<double> lin_u(n);
    for (int i = 0; i < n; ++i) lin_u[i] = lin_deriv_u(data, lat.u(i));

    // threshold anchored so that it equals eps^2 at p = 15
    const double anchor = std::log(15.0) / 15.0;
    const double thresh = eps * eps * std::sqrt((std::log(p) / p) / anchor);

    PiecewiseReport rep;
    for (int j = 0; j < n; ++j) {
        double length = 0.0;
        int components = 0;
        bool in_run = false;
        for (int i = 1; i + 1 < n; ++i) {
            const bool admissible = std::abs(lin_u[i]) >= eps;
            bool exceptional = false;
            if (admissible) {
                const double du = (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
                exceptional = std::abs(du * du - lin_u[i] * lin_u[i]) > thresh;
            }
            if (exceptional) {
                length += h;
                if (!in_run) {
                    ++components;
                    in_run = true;
                }
            } else {
                in_run = false;
            }
        }
        if (length > rep.exceptional_length_max) rep.exceptional_length_max = length;
        rep.exceptional_components_max = std::max(rep.exceptional_components_max, components);
    }

    for (int i = 1; i + 1 < n; ++i) {
        if (std::abs(lin_u[i]) > eps) continue;
        for (int j = 0; j < n; ++j) {
            const double du = (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
            const double duu = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (h * h);
            rep.degenerate_deriv_ratio = std::max(rep.degenerate_deriv_ratio, std::abs(du) / eps);
            rep.degenerate_second_ratio =
                std::max(rep.degenerate_second_ratio, std::abs(duu) / (eps * eps * p));
        }
    }
    return rep;
}

namespace {

double fit_rate(const std::vector<PerPMetrics>& per_p) {
    // least-squares slope of log(sup_distance) against log(log p / p)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : per_p) {
        if (r.blowup || !(r.sup_distance_to_limit > 0.0)) continue;
        const double x = std::log(std::log(r.p) / r.p);
        const double y = std::log(r.sup_distance_to_limit);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    const double denom = m * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
}

} // namespace

ConvergenceReport run_sweep(const SweepPlan& plan, const InitialData& data,
                            const Field2D* limit_field,
                            const std::function<void(const PerPMetrics&, const Field2D&)>& on_field) {
    if (plan.p_list.empty()) throw std::invalid_argument("run_sweep: empty p_list");
    for (std::size_t k = 0; k + 1 < plan.p_list.size(); ++k)
        if (!(plan.p_list[k] < plan.p_list[k + 1]))
            throw std::invalid_argument("run_sweep: p_list must be strictly increasing");
    if (plan.p_list.front() <= 1.0) throw std::invalid_argument("run_sweep: need p > 1");
    if (plan.lattice_n > 4097) throw std::invalid_argument("run_sweep: lattice_n above desk scale");

    NullLattice lat(plan.diamond, plan.lattice_n);

    LimitResult built = [&] {
        if (limit_field) return LimitResult{CharState(lat), DefectMeasure(lat)};
        return construct_limit(data, lat);
    }();
    const Field2D& limit = limit_field ? *limit_field : built.state.phi;
    if (!(limit.lattice() == lat))
        throw std::invalid_argument("run_sweep: limit field lattice does not match plan");

    ConvergenceReport report;
    report.plan = plan;
    report.per_p.resize(plan.p_list.size());

    std::atomic<std::size_t> next{0};
    auto job = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= plan.p_list.size()) return;
            PerPMetrics& m = report.per_p[k];
            m.p = plan.p_list[k];
            m.dx = plan.dx_for(m.p);
            try {
                SolveOptions opts;
                opts.cfl = plan.cfl;
                if (plan.triangle) opts.t_min_clip = 0.0;
                DiamondSolution sol = solve_on_diamond(data, m.p, plan.diamond, plan.lattice_n,
                                                       m.dx, opts);

                double sup = 0.0;
                for (int i = 0; i < lat.n(); ++i)
                    for (int j = 0; j < lat.n(); ++j) {
                        if (plan.triangle && lat.cart(i, j).t < -1e-12) continue;
                        sup = std::max(sup, std::abs(sol.field(i, j) - limit(i, j)));
                    }
                m.sup_distance_to_limit = sup;
                m.barrier_excess = (sol.stats.max_abs_phi - 1.0) * m.p - std::log(m.p);
                m.max_first_null_deriv = std::max(sol.stats.max_phi_u, sol.stats.max_phi_v);
                m.max_second_null_deriv_over_p =
                    std::max(sol.stats.max_phi_uu, sol.stats.max_phi_vv) / m.p;
                m.apc_residual = check_apc(sol.field, m.p, plan.apc_tau);
                const PiecewiseReport pw =
                    check_piecewise_lemma(sol.field, data, plan.piecewise_eps, m.p);
                m.piece_bad_length = pw.exceptional_length_max;
                m.piece_components = pw.exceptional_components_max;
                m.piece_degenerate_deriv = pw.degenerate_deriv_ratio;
                m.piece_degenerate_second = pw.degenerate_second_ratio;
                m.holder_constant = holder_check(sol.field, 20000, plan.seed);
                double drift = 0.0;
                if (!sol.trace.total_energy.empty()) {
                    const double e0 = sol.trace.total_energy.front();
                    for (double e : sol.trace.total_energy)
                        drift = std::max(drift, std::abs(e - e0));
                    drift /= std::max(std::abs(e0), 1e-12);
                }
                m.energy_drift_rel = drift;
                if (on_field) on_field(m, sol.field);
            } catch (const SolverBlowup& ex) {
                m.blowup = true;
                m.error = ex.what();
            }
        }
    };

    int workers = plan.workers > 0 ? plan.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(plan.p_list.size())));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(job);
    for (auto& th : pool) th.join();

    report.fitted_rate = fit_rate(report.per_p);
    return report;
}

} // namespace bw
