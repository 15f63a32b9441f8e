#pragma once

#include <cstdint>
#include <vector>

#include "bw/geometry.hpp"
#include "bw/initial_data.hpp"
#include "bw/limit_march.hpp"

namespace bw {

/// Region tags of the worked example's piecewise description.
enum class ExampleRegion { I, II, III, IV, V };

/// The worked-example scenario: initial data of the linear solution
/// 1 - delta((t-2)^2 + x^2 - 1), i.e. phi0 = 1 - delta(x^2+3), phi1 = 4 delta,
/// valid on |x| <= 10 (the domain of dependence of the triangle Delta).
InitialData example13_data(double delta = 1e-3, double support_radius = 10.0,
                           double taper_width = 2.0);

/// Closed-form limit field of the worked example on the triangle
/// Delta = {t >= 0, |t-x| <= 10, |t+x| <= 10}; throws outside Delta or for
/// delta outside (0, 1e-3].
std::pair<double, ExampleRegion> example_oracle(CartesianPoint p, double delta);

/// Marched limit field with per-column/per-row null increment magnitudes and
/// the sign bookkeeping of the reflection rule.
struct CharState {
    Field2D phi;
    std::vector<double> du_mag; ///< |phi_u| per u-column (edge increments / h)
    std::vector<double> dv_mag; ///< |phi_v| per v-row
    std::vector<std::int8_t> sig_u; ///< n*n signs of the u-edge increments
    std::vector<std::int8_t> sig_v;

    explicit CharState(NullLattice lat) : phi(lat) {}
    int n() const { return phi.n(); }
    std::int8_t sig_u_at(int i, int j) const { return sig_u[std::size_t(i) * n() + j]; }
    std::int8_t sig_v_at(int i, int j) const { return sig_v[std::size_t(i) * n() + j]; }
};

/// Nonnegative cell masses of -phi_tt + phi_xx = mu+ - mu- on the (n-1)^2
/// lattice cells, indexed by the cell's lower corner.
struct DefectMeasure {
    NullLattice lattice;
    std::vector<double> mu_plus;
    std::vector<double> mu_minus;
    int straddle_flags = 0; ///< cells touching both signs with non-negligible mass

    explicit DefectMeasure(NullLattice lat)
        : lattice(lat),
          mu_plus(std::size_t(lat.n() - 1) * (lat.n() - 1), 0.0),
          mu_minus(std::size_t(lat.n() - 1) * (lat.n() - 1), 0.0) {}
    int cells() const { return lattice.n() - 1; }
    double& plus(int ci, int cj) { return mu_plus[std::size_t(ci) * cells() + cj]; }
    double plus(int ci, int cj) const { return mu_plus[std::size_t(ci) * cells() + cj]; }
    double& minus(int ci, int cj) { return mu_minus[std::size_t(ci) * cells() + cj]; }
    double minus(int ci, int cj) const { return mu_minus[std::size_t(ci) * cells() + cj]; }
    double total_plus() const;
    double total_minus() const;
    double min_entry() const; ///< most negative recorded entry (noise gauge)
};

struct LimitResult {
    CharState state;
    DefectMeasure defect;
};

/// Builds the limit field on the lattice by the characteristic march.
/// Dense output; capped at n <= 8193 (use march_limit with a custom sink for
/// larger sweeps).
LimitResult construct_limit(const InitialData& data, const NullLattice& lat,
                            const MarchLimits& lim = {});

/// Per-cell mass -(parallelogram sum), mu+ where the cell touches phi > 0,
/// mu- (negated) where phi < 0; |mass| <= 1e-12 h dropped as noise.
DefectMeasure extract_defect(const Field2D& field);

/// Theorem-style certification of a candidate limit field.
struct PropertyReport {
    double lipschitz_constant = 0.0;      ///< max |null edge increment| / h
    int piecewise_segments_max = 0;       ///< max smooth pieces along any null line
    double initial_agreement_error = 0.0; ///< sup |field - dalembert| on the linear strip
    double t_lin = 0.0;                   ///< height of the strip that was checked
    double barrier_violation = 0.0;       ///< max (|phi| - 1)+
    double defect_negativity = 0.0;       ///< most negative cell mass, as a magnitude
    double defect_support_distance = 0.0; ///< cells from a mass cell to {phi near barrier}
    double reflection_error_median = 0.0; ///< median ||phi_u| - |lin_u|| (u and v pooled)
    double reflection_error_p95 = 0.0;
    double reflection_error_fraction_bad = 0.0; ///< fraction exceeding 10 h Lip
};

PropertyReport check_properties(const Field2D& field, const InitialData& data);

/// Local mu+ line density along a spacelike reflection curve, per unit u:
///   |lin_u(u)| + |lin_v(v)| |dv/du|,
/// from the flip of each null derivative family across the curve. The slope
/// dv/du must be negative (spacelike); throws std::domain_error otherwise.
double arc_density(const InitialData& data, CartesianPoint arc_point, double arc_slope_dv_du);

} // namespace bw
