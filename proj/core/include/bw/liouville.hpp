#pragma once

#include <functional>

#include "bw/geometry.hpp"

namespace bw {

// Closed-form solutions of Liouville's equation -psi_tt + psi_xx = e^psi,
// i.e. psi_uv = -(1/4) e^psi in null coordinates:
//   psi = log( -8 f'(u) g'(v) / (f(u) + g(v))^2 ).
// These are evaluated analytically (never by solving the PDE numerically);
// they serve as independent ground truth for the reflection layer.

struct LiouvilleSolution {
    std::function<double(double)> f;
    std::function<double(double)> f_prime;
    std::function<double(double)> g;
    std::function<double(double)> g_prime;
};

/// f = e^{a(u-t0)}, g = e^{-a(v-t0)}; reduces to the ODE reflection profile.
LiouvilleSolution exp_family(double a, double t0 = 0.0);

/// f(u) = u, g(v) = 1/v; psi = log(8/(uv+1)^2), valid where uv + 1 != 0.
LiouvilleSolution rational_family();

/// Formula value at p; throws std::domain_error if -8 f'g' <= 0 or f+g = 0.
double liouville_eval(const LiouvilleSolution& sol, NullPoint p);

/// max over the lattice interior of |psi_uv + (1/4) e^psi| using mixed
/// centered differences; O(h^2) for true solutions. Requires n >= 5.
double liouville_residual(const Field2D& field);

/// (max |d_v(psi_u^2/2 - psi_uu)|, max |d_u(psi_v^2/2 - psi_vv)|) by nested
/// centered differences; -> 0 under refinement for Liouville solutions.
std::pair<double, double> conservation_residual(const Field2D& field);

/// max over u-lines of the variation along v of psi_u^2/2 - psi_uu (the
/// integrated form of the first conservation law).
double conserved_u_variation(const Field2D& field);

/// Lorentz-boosted reflection profile
///   psi = log( 2a^2 / cosh^2( a [(t-t0) - speed (x-x0)] / sqrt(1-speed^2) ) ).
struct LorentzProfile {
    double a = 1.0;
    double speed = 0.0; // |speed| < 1
    double t0 = 0.0;
    double x0 = 0.0;
};

double lorentz_eval(const LorentzProfile& prof, CartesianPoint p);

/// F_p(s) = s (1 + s/p)^{p-1}, the almost-conservation density of the
/// rescaled equation psi_uv = -(1/4)(1 + psi/p)^p. Domain 1 + s/p >= 0.
double f_p(double s, double p);

/// max over the interior of |d_v(psi_u^2/2 - psi_uu) + F_p(psi) psi_v/(4p)|
/// for a rescaled solution sampled on the lattice. Requires n >= 7.
double almost_conservation_residual(const Field2D& field, double p);

} // namespace bw
