#include "bw/linear_wave.hpp"

#include <array>
#include <cmath>

#include "bw/numerics.hpp"

namespace bw {

double dalembert(const InitialData& data, CartesianPoint p) {
    const double a = p.x - p.t;
    const double b = p.x + p.t;
    const double R = data.support_radius();
    const double Z = data.zero_radius();
    // Kinks of the tapered data are quadrature breakpoints.
    const std::array<double, 4> knots{-Z, -R, R, Z};
    const double integral = integrate_adaptive([&](double y) { return data.phi1(y); }, a, b, 1e-10,
                                               std::span<const double>(knots));
    return 0.5 * (data.phi0(b) + data.phi0(a)) + 0.5 * integral;
}

double lin_deriv_u(const InitialData& data, double u) {
    return 0.5 * (data.phi1(u) + data.phi0_prime(u));
}

double lin_deriv_v(const InitialData& data, double v) {
    return 0.5 * (data.phi1(-v) - data.phi0_prime(-v));
}

std::pair<double, double> lin_null_derivs(const InitialData& data, CartesianPoint p) {
    return {lin_deriv_u(data, p.t + p.x), lin_deriv_v(data, p.t - p.x)};
}

} // namespace bw
