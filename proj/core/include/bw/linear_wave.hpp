#pragma once

#include "bw/geometry.hpp"
#include "bw/initial_data.hpp"

namespace bw {

// Exact solution of the free wave equation -phi_tt + phi_xx = 0:
//   phi(t,x) = (phi0(x+t) + phi0(x-t))/2 + (1/2) Int_{x-t}^{x+t} phi1
// and its null derivatives, which are functions of one null coordinate each:
//   phi_u(t,x) = (phi1 + phi0')(x+t)/2,   phi_v(t,x) = (phi1 - phi0')(x-t)/2.

/// d'Alembert value; the integral is computed by adaptive quadrature to
/// 1e-10 absolute.
double dalembert(const InitialData& data, CartesianPoint p);

/// (phi_u, phi_v) of the linear evolution at p.
std::pair<double, double> lin_null_derivs(const InitialData& data, CartesianPoint p);

/// phi_u of the linear evolution as a function of the null coordinate u, and
/// the v-analogue. Note the data arguments: x+t = u but x-t = -v.
double lin_deriv_u(const InitialData& data, double u);
double lin_deriv_v(const InitialData& data, double v);

} // namespace bw
