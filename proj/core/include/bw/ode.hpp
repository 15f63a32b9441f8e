#pragma once

#include <span>
#include <vector>

namespace bw {

// The scalar model -phi_tt = |phi|^{p-1} phi: large-p Hamiltonian integration,
// the explicit log(2a^2/cosh^2) reflection profile of psi_ss = -e^psi, the
// sawtooth limit trajectory, and the finite-p profile built from it.

struct OdeState {
    double p = 2.0;
    double phi = 0.0;
    double phi_t = 0.0;
    double t = 0.0;
};

/// Reflection profile parameters: psi(s) = log(2 a^2 / cosh^2(a (s - s0))).
struct ReflectionProfile {
    double a = 1.0;  // reflection speed, > 0
    double s0 = 0.0; // center in the rescaled variable
    double t0 = 0.0; // unscaled reflection time, when extracted from a trajectory
};

struct OdeTrajectory {
    double p = 2.0;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<double> phi;
    std::vector<double> phi_t;
    std::vector<double> hamiltonian; // (1/2) phi_t^2 + |phi|^{p+1}/(p+1)

    std::size_t size() const { return t.size(); }
};

/// Position-Verlet trajectory of (phi, phi_t). Requires |phi0| <= 1 and
/// dt <= 1/(4p) so the O(1/p) reflection layer is resolved. Throws if the
/// endpoint Hamiltonian drifts by more than 1e-6 relative (dt too large).
OdeTrajectory integrate_ode(double p, double phi0, double phi1, double t_end, double dt);

double hamiltonian(double p, double phi, double phi_t);

/// psi(s) = log(2a^2) - 2 log cosh(a(s - s0)); overflow-safe for large |s|.
double liouville_ode_profile(const ReflectionProfile& prof, double s);

/// max |psi_ss + e^psi| by centered differences on the given grid (O(h^2)).
double ode_residual(const ReflectionProfile& prof, std::span<const double> s_grid);

/// The p -> infinity trajectory: linear motion with velocity phi1 reflecting
/// at +-1 with equal and opposite velocity; constant when phi1 = 0.
double sawtooth_limit(double phi0, double phi1, double t);

/// Finite-p reflection asymptotic
///   1 + log(p)/p + (1/p) log(2a^2 / cosh^2(a p (t - t0))).
double phip_profile(double p, const ReflectionProfile& prof, double t);

/// Reflection time: argmax of |phi| refined by a quadratic fit through the
/// three samples around the discrete maximum.
double extract_reflection_time(const OdeTrajectory& traj);

/// Reflection speed: |phi_t| at the last |phi| = 0.5 crossing before the peak.
double extract_reflection_speed(const OdeTrajectory& traj, double t_peak);

} // namespace bw
