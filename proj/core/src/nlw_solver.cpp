#include "bw/nlw_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bw {

namespace {

double pow_uint(double x, unsigned long n) {
    double r = 1.0, b = x;
    while (n > 0) {
        if (n & 1ul) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

double abs_pow(double a, double p) {
    const double pr = std::round(p);
    if (pr == p && pr >= 0.0 && pr <= 65536.0) return pow_uint(a, static_cast<unsigned long>(pr));
    return std::pow(a, p);
}

double guard_threshold(double p) { return 1.0 + 50.0 / std::sqrt(p); }

} // namespace

double nonlinearity(double phi, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("nonlinearity: p must be > 1");
    if (phi == 0.0) return 0.0;
    const double a = std::abs(phi);
    if (a > guard_threshold(p))
        throw SolverBlowup("nonlinearity: |phi| exceeds the blow-up guard 1 + 50/sqrt(p)");
    return std::copysign(abs_pow(a, p), phi);
}

SimState make_initial_state(const InitialData& data, double p, double x_lo, double x_hi, double dx,
                            double cfl, bool periodic) {
    if (!(dx > 0.0) || !(x_hi > x_lo))
        throw std::invalid_argument("make_initial_state: bad spatial domain");
    if (!(cfl > 0.0) || cfl > 1.0)
        throw std::invalid_argument("make_initial_state: need 0 < cfl <= 1");
    SimState s;
    s.p = p;
    s.x_lo = x_lo;
    s.dx = dx;
    const int nx = static_cast<int>(std::llround((x_hi - x_lo) / dx)) + 1;
    if (nx < 3) throw std::invalid_argument("make_initial_state: fewer than 3 grid points");
    s.x_hi = x_lo + (nx - 1) * dx;
    s.dt = cfl * dx;
    s.t = 0.0;
    s.periodic = periodic;
    s.phi_curr.resize(nx);
    s.phi_prev.resize(nx);
    for (int j = 0; j < nx; ++j) s.phi_curr[j] = data.phi0(s.x(j));

    // phi(-dt) by a second-order Taylor step backwards, with the scheme's own
    // Laplacian so the first leapfrog update is consistent.
    const double dt = s.dt;
    for (int j = 0; j < nx; ++j) {
        double lap;
        if (j > 0 && j < nx - 1)
            lap = (s.phi_curr[j + 1] - 2.0 * s.phi_curr[j] + s.phi_curr[j - 1]) / (dx * dx);
        else if (periodic) {
            const int jm = (j - 1 + nx) % nx, jp = (j + 1) % nx;
            lap = (s.phi_curr[jp] - 2.0 * s.phi_curr[j] + s.phi_curr[jm]) / (dx * dx);
        } else
            lap = 0.0;
        s.phi_prev[j] = s.phi_curr[j] - dt * data.phi1(s.x(j)) +
                        0.5 * dt * dt * (lap - nonlinearity(s.phi_curr[j], p));
    }
    if (!periodic) {
        s.phi_prev.front() = s.phi_prev.back() = 0.0;
        s.phi_curr.front() = s.phi_curr.back() = 0.0;
    }
    return s;
}

namespace {

// next overwrites prev, then buffers are swapped by the caller
void leapfrog_update(const SimState& s, const std::vector<double>& prev,
                     const std::vector<double>& cur, std::vector<double>& next) {
    const int nx = static_cast<int>(cur.size());
    const double lam2 = (s.dt / s.dx) * (s.dt / s.dx);
    const double dt2 = s.dt * s.dt;
    const double p = s.p;
    const double guard = guard_threshold(p);
    const double pr = std::round(p);
    const bool int_p = (pr == p && pr >= 0.0 && pr <= 65536.0);
    double worst = 0.0;

    auto source = [&](double phi) {
        const double a = std::abs(phi);
        if (a > worst) worst = a;
        if (phi == 0.0) return 0.0;
        const double mag = int_p ? pow_uint(a, static_cast<unsigned long>(pr)) : std::pow(a, p);
        return std::copysign(mag, phi);
    };

    if (s.periodic) {
        for (int j = 0; j < nx; ++j) {
            const int jm = (j - 1 + nx) % nx, jp = (j + 1) % nx;
            next[j] = 2.0 * cur[j] - prev[j] + lam2 * (cur[jp] - 2.0 * cur[j] + cur[jm]) -
                      dt2 * source(cur[j]);
        }
    } else {
        next[0] = 0.0;
        next[nx - 1] = 0.0;
        for (int j = 1; j < nx - 1; ++j) {
            next[j] = 2.0 * cur[j] - prev[j] + lam2 * (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]) -
                      dt2 * source(cur[j]);
        }
    }
    if (worst > guard)
        throw SolverBlowup("leapfrog step: |phi| exceeded the blow-up guard 1 + 50/sqrt(p)");
    for (double v : next)
        if (!std::isfinite(v)) throw SolverBlowup("leapfrog step: non-finite value");
}

} // namespace

SimState step(const SimState& state) {
    SimState out = state;
    std::vector<double> next(state.phi_curr.size());
    leapfrog_update(state, state.phi_prev, state.phi_curr, next);
    out.phi_prev = state.phi_curr;
    out.phi_curr = std::move(next);
    out.t = state.t + state.dt;
    return out;
}

double energy(const SimState& s) {
    const int nx = s.nx();
    const double dx = s.dx;
    const double inv_dt = 1.0 / s.dt;
    double e = 0.0;
    auto x_deriv = [&](const std::vector<double>& a, int j) {
        if (s.periodic) {
            const int jm = (j - 1 + nx) % nx, jp = (j + 1) % nx;
            return (a[jp] - a[jm]) / (2.0 * dx);
        }
        if (j == 0) return (a[1] - a[0]) / dx;
        if (j == nx - 1) return (a[nx - 1] - a[nx - 2]) / dx;
        return (a[j + 1] - a[j - 1]) / (2.0 * dx);
    };
    for (int j = 0; j < nx; ++j) {
        const double w = (!s.periodic && (j == 0 || j == nx - 1)) ? 0.5 : 1.0;
        const double vt = (s.phi_curr[j] - s.phi_prev[j]) * inv_dt;
        const double gp = x_deriv(s.phi_prev, j);
        const double gc = x_deriv(s.phi_curr, j);
        const double vp = std::pow(std::abs(s.phi_prev[j]), s.p + 1.0) / (s.p + 1.0);
        const double vc = std::pow(std::abs(s.phi_curr[j]), s.p + 1.0) / (s.p + 1.0);
        e += w * dx * (0.5 * vt * vt + 0.5 * gp * gc + 0.5 * (vp + vc));
    }
    return e;
}

namespace {

struct LatticeBucket {
    int i, j;          // lattice indices
    double theta;      // weight between time levels k and k+1
    double x;          // spatial position
};

// Cross-section of the diamond at time t, in x.
bool diamond_window(const Diamond& d, double t, double& lo, double& hi) {
    lo = std::max(d.u_min() - t, t - d.v0);
    hi = std::min(d.u0 - t, t - d.v_min());
    return lo <= hi;
}

struct StatAccum {
    double max_abs_phi = 0.0;
    double max_u = 0.0, max_v = 0.0, max_uu = 0.0, max_vv = 0.0;
    std::int64_t steps = 0;
};

// Null derivatives at interior grid point j from three time levels.
void accumulate_derivs(const std::vector<double>& prev, const std::vector<double>& cur,
                       const std::vector<double>& next, int j, double dt, double dx, StatAccum& acc) {
    const double phi_t = (next[j] - prev[j]) / (2.0 * dt);
    const double phi_x = (cur[j + 1] - cur[j - 1]) / (2.0 * dx);
    const double phi_tt = (next[j] - 2.0 * cur[j] + prev[j]) / (dt * dt);
    const double phi_xx = (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]) / (dx * dx);
    const double phi_tx =
        (next[j + 1] - next[j - 1] - prev[j + 1] + prev[j - 1]) / (4.0 * dt * dx);
    const double pu = 0.5 * (phi_t + phi_x);
    const double pv = 0.5 * (phi_t - phi_x);
    const double puu = 0.25 * (phi_tt + 2.0 * phi_tx + phi_xx);
    const double pvv = 0.25 * (phi_tt - 2.0 * phi_tx + phi_xx);
    acc.max_u = std::max(acc.max_u, std::abs(pu));
    acc.max_v = std::max(acc.max_v, std::abs(pv));
    acc.max_uu = std::max(acc.max_uu, std::abs(puu));
    acc.max_vv = std::max(acc.max_vv, std::abs(pvv));
}

// One directed run covering t in [0, t_end]; fills buckets, accumulates
// stats/trace against the (possibly time-reflected) diamond.
void run_direction(const InitialData& data, double p, const Diamond& dia, bool reversed,
                   double t_end, double dx, const SolveOptions& opts, Field2D& out,
                   std::vector<LatticeBucket>&& buckets, EnergyTrace& trace, StatAccum& acc) {
    if (t_end <= 0.0 && buckets.empty()) return;

    const double Z = data.zero_radius();
    double wlo, whi;
    // Domain: diamond x-extent and data support, widened by the time horizon.
    const double x_d_lo = 0.5 * (dia.u_min() - dia.v0);
    const double x_d_hi = 0.5 * (dia.u0 - dia.v_min());
    const double x_lo = std::min(x_d_lo, -Z) - t_end - opts.pad;
    const double x_hi = std::max(x_d_hi, Z) + t_end + opts.pad;

    SimState s = [&] {
        if (!reversed) return make_initial_state(data, p, x_lo, x_hi, dx, opts.cfl);
        // Negative times: solve forward with (phi0, -phi1), map t -> -t.
        // data is already tapered, so the pass-through core must cover all of
        // it (support_radius = zero_radius) to avoid tapering twice.
        InitialData::ClosedForm f;
        f.phi0 = [&data](double y) { return data.phi0(y); };
        f.phi0_prime = [&data](double y) { return data.phi0_prime(y); };
        f.phi0_second = [&data](double y) { return data.phi0_second(y); };
        f.phi1 = [&data](double y) { return -data.phi1(y); };
        f.phi1_prime = [&data](double y) { return -data.phi1_prime(y); };
        auto rd = InitialData::from_closed_form(std::move(f), data.zero_radius(), 1.0);
        return make_initial_state(rd, p, x_lo, x_hi, dx, opts.cfl);
    }();

    const double dt = s.dt;
    const auto steps = static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
    std::sort(buckets.begin(), buckets.end(), [&](const LatticeBucket& a, const LatticeBucket& b) {
        return a.theta < b.theta; // theta temporarily holds t here
    });
    // convert times to (bucket index, weight)
    std::vector<std::pair<std::int64_t, LatticeBucket>> todo;
    todo.reserve(buckets.size());
    for (auto& b : buckets) {
        const double t = b.theta;
        auto k = static_cast<std::int64_t>(std::floor(t / dt));
        if (k >= steps) k = steps - 1;
        if (k < 0) k = 0;
        LatticeBucket bb = b;
        bb.theta = (t - k * dt) / dt;
        todo.emplace_back(k, bb);
    }

    const std::int64_t trace_stride = std::max<std::int64_t>(1, steps / std::max(1, opts.trace_samples));
    std::size_t cursor = 0;
    std::vector<double> next(s.phi_curr.size());

    auto sample_level = [&](const std::vector<double>& a, double x) {
        double sj = (x - s.x_lo) / dx;
        int j = static_cast<int>(std::floor(sj));
        j = std::max(0, std::min(j, s.nx() - 2));
        const double w = sj - j;
        return (1.0 - w) * a[j] + w * a[j + 1];
    };

    for (std::int64_t k = 0; k < steps; ++k) {
        leapfrog_update(s, s.phi_prev, s.phi_curr, next);
        const double t_cur = k * dt;

        // stats at level k (needs all three levels)
        if (opts.track_derivatives) {
            const double t_orig = reversed ? -t_cur : t_cur;
            if (diamond_window(dia, t_orig, wlo, whi)) {
                int j_lo = std::max(1, static_cast<int>(std::ceil((wlo - s.x_lo) / dx)));
                int j_hi = std::min(s.nx() - 2, static_cast<int>(std::floor((whi - s.x_lo) / dx)));
                for (int j = j_lo; j <= j_hi; ++j) {
                    acc.max_abs_phi = std::max(acc.max_abs_phi, std::abs(s.phi_curr[j]));
                    accumulate_derivs(s.phi_prev, s.phi_curr, next, j, dt, dx, acc);
                }
            }
        }

        if (k % trace_stride == 0) {
            const double t_orig = reversed ? -(t_cur - 0.5 * dt) : (t_cur - 0.5 * dt);
            double eloc = 0.0;
            if (diamond_window(dia, t_orig, wlo, whi)) {
                int j_lo = std::max(1, static_cast<int>(std::ceil((wlo - s.x_lo) / dx)));
                int j_hi = std::min(s.nx() - 2, static_cast<int>(std::floor((whi - s.x_lo) / dx)));
                for (int j = j_lo; j <= j_hi; ++j) {
                    const double vt = (s.phi_curr[j] - s.phi_prev[j]) / dt;
                    const double gp = (s.phi_prev[j + 1] - s.phi_prev[j - 1]) / (2.0 * dx);
                    const double gc = (s.phi_curr[j + 1] - s.phi_curr[j - 1]) / (2.0 * dx);
                    const double vpc = std::pow(std::abs(s.phi_curr[j]), p + 1.0) / (p + 1.0);
                    const double vpp = std::pow(std::abs(s.phi_prev[j]), p + 1.0) / (p + 1.0);
                    eloc += dx * (0.5 * vt * vt + 0.5 * gp * gc + 0.5 * (vpc + vpp));
                }
            }
            trace.times.push_back(t_orig);
            trace.total_energy.push_back(energy(s));
            trace.local_energy.push_back(eloc);
        }

        // fill lattice points living between levels k and k+1
        while (cursor < todo.size() && todo[cursor].first == k) {
            const auto& b = todo[cursor].second;
            const double lo_v = sample_level(s.phi_curr, b.x);
            const double hi_v = sample_level(next, b.x);
            out.at(b.i, b.j) = (1.0 - b.theta) * lo_v + b.theta * hi_v;
            ++cursor;
        }

        std::swap(s.phi_prev, s.phi_curr);
        std::swap(s.phi_curr, next);
        s.t += dt;
        ++acc.steps;
    }
}

} // namespace

DiamondSolution solve_on_diamond(const InitialData& data, double p, Diamond diamond, int lattice_n,
                                 double dx, const SolveOptions& opts) {
    NullLattice lat(diamond, lattice_n);
    DiamondSolution sol{Field2D(lat)};

    std::vector<LatticeBucket> fwd, bwd;
    for (int i = 0; i < lattice_n; ++i) {
        for (int j = 0; j < lattice_n; ++j) {
            const CartesianPoint c = lat.cart(i, j);
            if (c.t < opts.t_min_clip - 1e-12) {
                sol.field.at(i, j) = 0.0;
                continue;
            }
            if (c.t == 0.0) {
                sol.field.at(i, j) = data.phi0(c.x);
            } else if (c.t > 0.0) {
                fwd.push_back({i, j, c.t, c.x});
            } else {
                bwd.push_back({i, j, -c.t, c.x});
            }
        }
    }

    double t_fwd = 0.0, t_bwd = 0.0;
    for (const auto& b : fwd) t_fwd = std::max(t_fwd, b.theta);
    for (const auto& b : bwd) t_bwd = std::max(t_bwd, b.theta);

    StatAccum acc_f, acc_b;
    EnergyTrace trace_f, trace_b;
    if (!fwd.empty())
        run_direction(data, p, diamond, false, t_fwd, dx, opts, sol.field, std::move(fwd), trace_f,
                      acc_f);
    if (!bwd.empty())
        run_direction(data, p, diamond, true, t_bwd, dx, opts, sol.field, std::move(bwd), trace_b,
                      acc_b);

    // merge: reversed-run u/v roles are swapped back here
    sol.stats.max_abs_phi = std::max(acc_f.max_abs_phi, acc_b.max_abs_phi);
    sol.stats.max_phi_u = std::max(acc_f.max_u, acc_b.max_v);
    sol.stats.max_phi_v = std::max(acc_f.max_v, acc_b.max_u);
    sol.stats.max_phi_uu = std::max(acc_f.max_uu, acc_b.max_vv);
    sol.stats.max_phi_vv = std::max(acc_f.max_vv, acc_b.max_uu);
    sol.stats.steps = acc_f.steps + acc_b.steps;

    for (std::size_t k = trace_b.times.size(); k-- > 0;) {
        sol.trace.times.push_back(trace_b.times[k]);
        sol.trace.total_energy.push_back(trace_b.total_energy[k]);
        sol.trace.local_energy.push_back(trace_b.local_energy[k]);
    }
    for (std::size_t k = 0; k < trace_f.times.size(); ++k) {
        sol.trace.times.push_back(trace_f.times[k]);
        sol.trace.total_energy.push_back(trace_f.total_energy[k]);
        sol.trace.local_energy.push_back(trace_f.local_energy[k]);
    }
    return sol;
}

double holder_check(const Field2D& f, int samples, std::uint64_t seed) {
    const int n = f.n();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const int i1 = pick(rng), j1 = pick(rng), i2 = pick(rng), j2 = pick(rng);
        if (i1 == i2 && j1 == j2) continue;
        const CartesianPoint a = f.lattice().cart(i1, j1);
        const CartesianPoint b = f.lattice().cart(i2, j2);
        const double denom = std::sqrt(std::abs(a.x - b.x)) + std::sqrt(std::abs(a.t - b.t));
        if (denom == 0.0) continue;
        worst = std::max(worst, std::abs(f(i1, j1) - f(i2, j2)) / denom);
    }
    return worst;
}

} // namespace bw
