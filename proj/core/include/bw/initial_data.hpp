#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bw/numerics.hpp"

namespace bw {

/// Smooth initial pair (phi0, phi1) with derivative access.
///
/// The functions are defined by closed-form callables or by cubic-spline
/// interpolated samples on a core interval |x| <= support_radius. Outside it
/// they are multiplied by a C2 quintic-smoothstep cutoff that reaches exactly
/// zero at |x| = support_radius + taper_width. The taper keeps the data
/// smooth for the finite-difference solver; by finite speed of propagation it
/// cannot influence any point whose backward light cone stays inside the core
/// interval.
class InitialData {
public:
    struct ClosedForm {
        std::function<double(double)> phi0;
        std::function<double(double)> phi0_prime;
        std::function<double(double)> phi0_second;
        std::function<double(double)> phi1;
        std::function<double(double)> phi1_prime;
    };

    static InitialData from_closed_form(ClosedForm f, double support_radius,
                                        double taper_width = 2.0);
    /// Natural cubic splines through "x, phi0, phi1" samples.
    static InitialData from_samples(const std::vector<double>& x, const std::vector<double>& phi0,
                                    const std::vector<double>& phi1, double support_radius,
                                    double taper_width = 2.0);

    double phi0(double x) const;
    double phi0_prime(double x) const;
    double phi0_second(double x) const;
    double phi1(double x) const;
    double phi1_prime(double x) const;

    double support_radius() const { return radius_; }
    double taper_width() const { return taper_; }
    /// Both functions vanish identically for |x| >= this.
    double zero_radius() const { return radius_ + taper_; }

    /// max |phi0| on a fine sampling; the strict barrier hypothesis requires < 1.
    double sup_phi0(int samples = 8192) const;
    /// Throws std::domain_error if sup|phi0| >= 1.
    void require_barrier_condition() const;

private:
    InitialData() = default;
    double cutoff(double x) const;
    double cutoff_prime(double x) const;
    double cutoff_second(double x) const;

    ClosedForm f_;
    double radius_ = 0.0;
    double taper_ = 2.0;
};

/// Maximal subintervals where |(phi1 +- phi0')/2| <= tol, located on a fine
/// sampling of the given interval. The numerical stand-in for the paper-level
/// requirement that these zero sets have finitely many components.
struct NondegeneracyReport {
    std::vector<std::pair<double, double>> plus_zero_intervals;
    std::vector<std::pair<double, double>> minus_zero_intervals;
    int component_count = 0;
};

NondegeneracyReport check_nondegeneracy(const InitialData& data, std::pair<double, double> interval,
                                        double tol = 1e-9, int samples = 16384);

} // namespace bw
