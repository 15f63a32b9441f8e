#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bw/geometry.hpp"
#include "bw/initial_data.hpp"
#include "bw/linear_wave.hpp"
#include "bw/numerics.hpp"

namespace bw {

// Characteristic march for the p -> infinity limit field.
//
// The lattice is swept in increasing u+v, two rows in memory. Interior rule
// is the zero-defect parallelogram
//     phi<u,v> = phi<u-h,v> + phi<u,v-h> - phi<u-h,v-h>,
// which propagates both null increments unchanged. When the tentative value
// leaves [-1,1], every incoming increment pushing into the barrier flips
// sign, magnitude preserved, and the value deficit is booked as defect mass
// (mu+ at the +1 barrier, mu- at -1).
//
// Flipping all pushers (rather than the larger one first with a re-test) is
// what keeps the null magnitudes exact: where a spacelike reflection curve
// crosses a cell, both families carry full-size pushers and both must
// reflect; where only one family crosses, the transverse increment has
// already bent to the post-crossing profile and is O(h) small, so a spurious
// flip of it perturbs values by O(h) only. A single-flip rule instead leaves
// the transverse family off by twice the flipped increment along the whole
// remaining characteristic, an O(1)-in-h derivative error.
//
// Sink receives every node:
//   sink.edge(i, j, value)                      on the two lower edges,
//   sink.cell(i, j, sw, nw, se, value, mp, mm)  in the interior, where
//     sw = phi<u-h,v-h>, nw = phi<u-h,v>, se = phi<u,v-h>.

struct MarchLimits {
    /// Overshoot allowed past the barrier after all flips, in units of h.
    double coarse_overshoot_cells = 10.0;
    /// Refuse data whose nondegeneracy scan finds more components than this.
    int max_zero_components = 64;
    /// Tolerance used by the nondegeneracy scan.
    double nondegeneracy_tol = 1e-9;
};

/// F, G with dalembert = F(u) + G(v); cumulative quadrature of phi1 along the
/// given nodes (exact for the piecewise-polynomial tapered data).
std::vector<double> dalembert_profile_u(const InitialData& data, const std::vector<double>& nodes);
std::vector<double> dalembert_profile_v(const InitialData& data, const std::vector<double>& nodes);

void march_precheck(const InitialData& data, const NullLattice& lat, const MarchLimits& lim);

template <class Sink>
void march_limit(const InitialData& data, const NullLattice& lat, Sink&& sink,
                 const MarchLimits& lim = {}) {
    march_precheck(data, lat, lim);
    const int n = lat.n();
    const double h = lat.h();

    std::vector<double> u_nodes(n), v_nodes(n);
    for (int i = 0; i < n; ++i) u_nodes[i] = lat.u(i);
    for (int j = 0; j < n; ++j) v_nodes[j] = lat.v(j);
    const std::vector<double> F = dalembert_profile_u(data, u_nodes);
    const std::vector<double> G = dalembert_profile_v(data, v_nodes);

    auto check_edge = [&](double value, const char* which) {
        if (!(std::abs(value) < 1.0))
            throw std::domain_error(std::string("march_limit: linear solution reaches the barrier "
                                                "on the lattice ") +
                                    which + " edge; enlarge the diamond or move it down in time");
    };

    std::vector<double> prev(n), cur(n);
    for (int j = 0; j < n; ++j) {
        prev[j] = F[0] + G[j];
        check_edge(prev[j], "v");
        sink.edge(0, j, prev[j]);
    }

    const double overshoot_cap = lim.coarse_overshoot_cells * h;
    for (int i = 1; i < n; ++i) {
        cur[0] = F[i] + G[0];
        check_edge(cur[0], "u");
        sink.edge(i, 0, cur[0]);
        for (int j = 1; j < n; ++j) {
            const double sw = prev[j - 1];
            const double nw = prev[j];
            const double se = cur[j - 1];
            const double eu = se - sw; // incoming u-increment
            const double ev = nw - sw; // incoming v-increment
            const double t0 = nw + se - sw;
            double val = t0, mp = 0.0, mm = 0.0;
            if (t0 > 1.0) {
                if (eu > 0.0) val -= 2.0 * eu;
                if (ev > 0.0) val -= 2.0 * ev;
                if (val > 1.0 + overshoot_cap)
                    throw std::runtime_error(
                        "march_limit: overshoot persists after flipping both increments; "
                        "lattice too coarse for this data");
                mp = t0 - val;
            } else if (t0 < -1.0) {
                if (eu < 0.0) val -= 2.0 * eu;
                if (ev < 0.0) val -= 2.0 * ev;
                if (val < -1.0 - overshoot_cap)
                    throw std::runtime_error(
                        "march_limit: overshoot persists after flipping both increments; "
                        "lattice too coarse for this data");
                mm = val - t0;
            }
            cur[j] = val;
            sink.cell(i, j, sw, nw, se, val, mp, mm);
        }
        std::swap(prev, cur);
    }
}

} // namespace bw
