#include "bw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bw {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw std::runtime_error("integrate_adaptive: non-finite integrand sample");
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_segment(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw std::runtime_error("integrate_adaptive: non-finite integrand sample");
    const double whole = simpson(fa, fm, fb, a, b);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, std::span<const double> breakpoints) {
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> knots;
    knots.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b) knots.push_back(c);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());

    double total = 0.0;
    const double seg_tol = abs_tol / static_cast<double>(knots.size() - 1);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k)
        total += integrate_segment(f, knots[k], knots[k + 1], seg_tol);
    return sign * total;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("CubicSpline: need >= 2 samples, matching sizes");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1]))
            throw std::invalid_argument("CubicSpline: abscissae must be strictly increasing");

    // Natural spline: tridiagonal solve for knot second derivatives.
    m_.assign(n, 0.0);
    if (n == 2) return;
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (hl + hr);
        upper[i] = hr;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    // Thomas algorithm (lower diagonal mirrors upper's h-values).
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double w = hl / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::find_interval(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) i = 1;
    if (i >= x_.size()) i = x_.size() - 1;
    return i - 1;
}

double CubicSpline::value(double x) const {
    if (empty() || x < x_.front() || x > x_.back()) return 0.0;
    const std::size_t i = find_interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    if (empty() || x < x_.front() || x > x_.back()) return 0.0;
    const std::size_t i = find_interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
    if (empty() || x < x_.front() || x > x_.back()) return 0.0;
    const std::size_t i = find_interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * m_[i] + b * m_[i + 1];
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

double log_cosh(double x) {
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

} // namespace bw
