#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bw/geometry.hpp"
#include "bw/initial_data.hpp"

namespace bw {

// Explicit leapfrog for -phi_tt + phi_xx = -|phi|^{p-1} phi on an interval,
//   phi^{n+1}_j = 2 phi^n_j - phi^{n-1}_j
//               + (dt/dx)^2 (phi^n_{j+1} - 2 phi^n_j + phi^n_{j-1})
//               - dt^2 sign(phi^n_j) |phi^n_j|^p,
// boundaries held at 0 (or periodic wrap). The amplitude-triggered stiffness
// of the source limits the useful range to |phi| <= 1 + O(log p / p); the
// guard below treats anything past 1 + 50/sqrt(p) as a discretization failure.

struct SolverBlowup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// sign(phi) |phi|^p. Integer p uses binary powering (exact sign handling for
/// the odd integer exponents used in sweeps), otherwise std::pow.
/// Throws SolverBlowup past the guard threshold 1 + 50/sqrt(p).
double nonlinearity(double phi, double p);

struct SimState {
    double p = 3.0;
    double x_lo = -1.0;
    double x_hi = 1.0;
    double dx = 0.01;
    double dt = 0.005;
    double t = 0.0; // time of phi_curr; phi_prev holds t - dt
    bool periodic = false;
    std::vector<double> phi_prev;
    std::vector<double> phi_curr;

    int nx() const { return static_cast<int>(phi_curr.size()); }
    double x(int j) const { return x_lo + j * dx; }
};

/// Two-level state at t = 0 with a time-symmetric Taylor start:
/// phi_prev = phi(-dt) = phi0 - dt phi1 + (dt^2/2)(phi0'' - N(phi0)).
SimState make_initial_state(const InitialData& data, double p, double x_lo, double x_hi, double dx,
                            double cfl = 0.5, bool periodic = false);

/// One leapfrog update; pure transition, input state unchanged.
SimState step(const SimState& state);

/// Trapezoid-rule energy (1/2) phi_t^2 + (1/2) phi_x^2 + |phi|^{p+1}/(p+1),
/// with phi_t from the two stored levels; reported at the half level t - dt/2.
double energy(const SimState& state);

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> total_energy;
    std::vector<double> local_energy; // restricted to the shrinking diamond cross-section
};

/// Grid-resolution maxima over the target diamond, accumulated during
/// stepping. The comparison lattice is far coarser than the O(1/p) reflection
/// layer, so second derivatives must be measured here, not on Field2D output.
struct SolveStats {
    double max_abs_phi = 0.0;
    double max_phi_u = 0.0;
    double max_phi_v = 0.0;
    double max_phi_uu = 0.0;
    double max_phi_vv = 0.0;
    std::int64_t steps = 0;
};

struct SolveOptions {
    double cfl = 0.5;
    /// Lattice points with t below this are filled with 0 and not solved
    /// (used to restrict a sweep to the upper triangle of a diamond).
    double t_min_clip = -std::numeric_limits<double>::infinity();
    double pad = 0.5;       // spatial margin beyond the causal requirement
    int trace_samples = 1024; // approximate number of energy-trace rows
    bool track_derivatives = true;
};

struct DiamondSolution {
    Field2D field;
    EnergyTrace trace;
    SolveStats stats;

    DiamondSolution(Field2D f) : field(std::move(f)) {}
};

/// Time-steps the data over the diamond's time span (negative times via time
/// reversal), samples phi onto the n x n null lattice by bilinear
/// interpolation in (t,x). The spatial domain is sized so the zero boundaries
/// stay causally disconnected from the solution support.
DiamondSolution solve_on_diamond(const InitialData& data, double p, Diamond diamond, int lattice_n,
                                 double dx, const SolveOptions& opts = {});

/// max over random lattice point pairs of
///   |phi(p1) - phi(p2)| / (|x1-x2|^{1/2} + |t1-t2|^{1/2}).
double holder_check(const Field2D& f, int samples, std::uint64_t seed = 0x5eed);

} // namespace bw
