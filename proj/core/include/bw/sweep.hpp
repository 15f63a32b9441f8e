#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bw/geometry.hpp"
#include "bw/initial_data.hpp"
#include "bw/limit.hpp"
#include "bw/nlw_solver.hpp"

namespace bw {

// p-sweep orchestration: runs the solver per p, compares against the
// constructed limit, and turns the quantitative a priori estimates into
// fitted-constant metrics (constant fitted at the smallest p, stability
// across the sweep is the property under test).

struct SweepPlan {
    std::string scenario = "example13";
    std::vector<double> p_list{15, 31, 63, 127, 255};
    Diamond diamond{10.0, 10.0, 20.0};
    bool triangle = true; ///< restrict solving/comparison to t >= 0
    int lattice_n = 1025;
    std::string dx_rule = "scaled"; ///< "scaled": dx = 1/(dx_scale p); "fixed": dx = dx_fixed
    double dx_scale = 8.0;
    double dx_fixed = 1e-3;
    double cfl = 0.5;
    int workers = 0; ///< 0 = hardware concurrency
    double apc_tau = 0.25;
    double piecewise_eps = 5e-4;
    std::uint64_t seed = 0x5eed;

    double dx_for(double p) const;
};

struct PerPMetrics {
    double p = 0.0;
    double dx = 0.0;
    double sup_distance_to_limit = 0.0;
    double barrier_excess = 0.0; ///< C(p) = (max|phi| - 1) p - log p
    double max_first_null_deriv = 0.0;
    double max_second_null_deriv_over_p = 0.0;
    double apc_residual = 0.0;    ///< max APC variation normalized by log(p)/p
    double piece_bad_length = 0.0;
    int piece_components = 0;
    double piece_degenerate_deriv = 0.0;
    double piece_degenerate_second = 0.0;
    double holder_constant = 0.0;
    double energy_drift_rel = 0.0;
    bool blowup = false;
    std::string error;
};

struct ConvergenceReport {
    SweepPlan plan;
    std::vector<PerPMetrics> per_p;
    double fitted_rate = 0.0; ///< log-log slope of sup_distance against log(p)/p
};

/// Variation of the almost-conserved quantity (phi_u^2/2 -+ phi_uu/p) along
/// v over windows |r| <= tau, max over admissible u-lines, normalized by
/// log(p)/p. The -(+) branch applies where phi >= -1/2 (phi <= +1/2).
double check_apc(const Field2D& field_p, double p, double tau = 0.25);

struct PiecewiseReport {
    double exceptional_length_max = 0.0; ///< max over v-lines, total length
    int exceptional_components_max = 0;
    double degenerate_deriv_ratio = 0.0;  ///< max |phi_u| / eps where |lin_u| <= eps
    double degenerate_second_ratio = 0.0; ///< max |phi_uu| / (eps^2 p) there
};

/// Exceptional set of | |phi_u|^2 - |lin_u|^2 | > eps^2 sqrt((log p/p)/(log 15/15))
/// on u-intervals with |lin_u| >= eps, per v-line; degenerate ratios on the
/// complement. The threshold anchor makes the p = 15 threshold exactly eps^2.
PiecewiseReport check_piecewise_lemma(const Field2D& field_p, const InitialData& data, double eps,
                                      double p);

/// Runs the plan against the given data. limit_field, when provided, is used
/// as phi-infinity; otherwise it is constructed on the plan lattice.
/// on_field, when set, receives each finished p-run (called from worker
/// threads; one call per p, distinct p).
ConvergenceReport run_sweep(const SweepPlan& plan, const InitialData& data,
                            const Field2D* limit_field = nullptr,
                            const std::function<void(const PerPMetrics&, const Field2D&)>& on_field = {});

} // namespace bw
