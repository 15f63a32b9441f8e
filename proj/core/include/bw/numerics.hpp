#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bw {

/// Adaptive Simpson quadrature with absolute tolerance.
/// Splits at the given breakpoints first (integrand kinks), then refines
/// recursively with Richardson correction. Integrand must be finite on [a,b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-10, std::span<const double> breakpoints = {});

/// Natural cubic spline through strictly increasing abscissae. C2 on the
/// sample hull, evaluates to 0 outside it.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double x_min() const { return x_.empty() ? 0.0 : x_.front(); }
    double x_max() const { return x_.empty() ? 0.0 : x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_; // m_ = second derivatives at knots
    std::size_t find_interval(double x) const;
};

/// Shortest decimal that round-trips a double (uses 17 significant digits).
std::string format_double(double v);

/// FNV-1a 64-bit; stable across runs and platforms, used for config hashes.
std::uint64_t fnv1a64(const std::string& s);

/// log(cosh(x)) without overflow for large |x|.
double log_cosh(double x);

} // namespace bw
