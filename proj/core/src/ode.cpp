#include "bw/ode.hpp"

#include <cmath>
#include <stdexcept>

#include "bw/nlw_solver.hpp"
#include "bw/numerics.hpp"

namespace bw {

double hamiltonian(double p, double phi, double phi_t) {
    return 0.5 * phi_t * phi_t + std::pow(std::abs(phi), p + 1.0) / (p + 1.0);
}

OdeTrajectory integrate_ode(double p, double phi0, double phi1, double t_end, double dt) {
    if (!(p > 1.0)) throw std::invalid_argument("integrate_ode: p must be > 1");
    if (std::abs(phi0) > 1.0) throw std::invalid_argument("integrate_ode: need |phi0| <= 1");
    if (!(dt > 0.0) || dt > 1.0 / (4.0 * p) * (1.0 + 1e-12))
        throw std::invalid_argument("integrate_ode: need 0 < dt <= 1/(4p)");
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate_ode: t_end must be > 0");

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    OdeTrajectory traj;
    traj.p = p;
    traj.dt = dt;
    traj.t.reserve(steps + 1);
    traj.phi.reserve(steps + 1);
    traj.phi_t.reserve(steps + 1);
    traj.hamiltonian.reserve(steps + 1);

    double q = phi0, v = phi1;
    traj.t.push_back(0.0);
    traj.phi.push_back(q);
    traj.phi_t.push_back(v);
    traj.hamiltonian.push_back(hamiltonian(p, q, v));

    for (std::size_t k = 1; k <= steps; ++k) {
        // position Verlet: drift - kick - drift
        q += 0.5 * dt * v;
        v -= dt * nonlinearity(q, p);
        q += 0.5 * dt * v;
        traj.t.push_back(k * dt);
        traj.phi.push_back(q);
        traj.phi_t.push_back(v);
        traj.hamiltonian.push_back(hamiltonian(p, q, v));
    }

    const double h0 = traj.hamiltonian.front();
    const double hN = traj.hamiltonian.back();
    if (std::abs(hN - h0) > 1e-6 * std::max(h0, 1e-300))
        throw std::runtime_error("integrate_ode: endpoint energy drift exceeds 1e-6, dt too large");
    return traj;
}

double liouville_ode_profile(const ReflectionProfile& prof, double s) {
    if (!(prof.a > 0.0)) throw std::invalid_argument("liouville_ode_profile: a must be > 0");
    return std::log(2.0 * prof.a * prof.a) - 2.0 * log_cosh(prof.a * (s - prof.s0));
}

double ode_residual(const ReflectionProfile& prof, std::span<const double> s_grid) {
    if (s_grid.size() < 3) throw std::invalid_argument("ode_residual: need >= 3 grid points");
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < s_grid.size(); ++k) {
        const double hl = s_grid[k] - s_grid[k - 1];
        const double hr = s_grid[k + 1] - s_grid[k];
        const double pm = liouville_ode_profile(prof, s_grid[k - 1]);
        const double pc = liouville_ode_profile(prof, s_grid[k]);
        const double pp = liouville_ode_profile(prof, s_grid[k + 1]);
        // centered second difference on a (possibly nonuniform) grid
        const double dss = 2.0 * (hl * pp - (hl + hr) * pc + hr * pm) / (hl * hr * (hl + hr));
        worst = std::max(worst, std::abs(dss + std::exp(pc)));
    }
    return worst;
}

double sawtooth_limit(double phi0, double phi1, double t) {
    if (std::abs(phi0) > 1.0) throw std::invalid_argument("sawtooth_limit: need |phi0| <= 1");
    if (phi1 == 0.0) return phi0;
    // Fold the free motion phi0 + phi1 t into [-1,1] as a triangle wave.
    double z = std::fmod(phi0 + phi1 * t + 1.0, 4.0);
    if (z < 0.0) z += 4.0;
    return z <= 2.0 ? z - 1.0 : 3.0 - z;
}

double phip_profile(double p, const ReflectionProfile& prof, double t) {
    if (!(p > 1.0)) throw std::invalid_argument("phip_profile: p must be > 1");
    ReflectionProfile scaled{prof.a, 0.0, 0.0};
    return 1.0 + std::log(p) / p + liouville_ode_profile(scaled, prof.a == 0.0 ? 0.0 : p * (t - prof.t0)) / p;
}

double extract_reflection_time(const OdeTrajectory& traj) {
    if (traj.size() < 3) throw std::invalid_argument("extract_reflection_time: trajectory too short");
    std::size_t k_max = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (std::abs(traj.phi[k]) > best) {
            best = std::abs(traj.phi[k]);
            k_max = k;
        }
    }
    if (k_max == 0 || k_max + 1 == traj.size()) return traj.t[k_max];
    // quadratic fit through the three samples around the peak
    const double ym = std::abs(traj.phi[k_max - 1]);
    const double yc = std::abs(traj.phi[k_max]);
    const double yp = std::abs(traj.phi[k_max + 1]);
    const double denom = ym - 2.0 * yc + yp;
    const double shift = denom == 0.0 ? 0.0 : 0.5 * (ym - yp) / denom;
    return traj.t[k_max] + shift * traj.dt;
}

double extract_reflection_speed(const OdeTrajectory& traj, double t_peak) {
    const double thresh = 0.5;
    double speed = 0.0;
    bool found = false;
    for (std::size_t k = 1; k < traj.size() && traj.t[k] <= t_peak; ++k) {
        const bool below = std::abs(traj.phi[k - 1]) < thresh;
        const bool above = std::abs(traj.phi[k]) >= thresh;
        if (below && above) {
            speed = std::abs(traj.phi_t[k]);
            found = true;
        }
    }
    if (!found)
        throw std::runtime_error("extract_reflection_speed: no |phi| = 0.5 crossing before peak");
    return speed;
}

} // namespace bw
