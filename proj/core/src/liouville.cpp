#include "bw/liouville.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bw/numerics.hpp"

namespace bw {

LiouvilleSolution exp_family(double a, double t0) {
    if (!(a > 0.0)) throw std::invalid_argument("exp_family: a must be > 0");
    LiouvilleSolution s;
    s.f = [a, t0](double u) { return std::exp(a * (u - t0)); };
    s.f_prime = [a, t0](double u) { return a * std::exp(a * (u - t0)); };
    s.g = [a, t0](double v) { return std::exp(-a * (v - t0)); };
    s.g_prime = [a, t0](double v) { return -a * std::exp(-a * (v - t0)); };
    return s;
}

LiouvilleSolution rational_family() {
    LiouvilleSolution s;
    s.f = [](double u) { return u; };
    s.f_prime = [](double) { return 1.0; };
    s.g = [](double v) { return 1.0 / v; };
    s.g_prime = [](double v) { return -1.0 / (v * v); };
    return s;
}

double liouville_eval(const LiouvilleSolution& sol, NullPoint p) {
    const double num = -8.0 * sol.f_prime(p.u) * sol.g_prime(p.v);
    const double den = sol.f(p.u) + sol.g(p.v);
    if (!(num > 0.0)) throw std::domain_error("liouville_eval: -8 f'(u) g'(v) must be positive");
    if (den == 0.0) throw std::domain_error("liouville_eval: f(u) + g(v) vanishes");
    return std::log(num / (den * den));
}

double liouville_residual(const Field2D& f) {
    const int n = f.n();
    if (n < 5) throw std::invalid_argument("liouville_residual: need n >= 5");
    const double h = f.h();
    double worst = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        for (int j = 1; j < n - 1; ++j) {
            const double uv =
                (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) /
                (4.0 * h * h);
            worst = std::max(worst, std::abs(uv + 0.25 * std::exp(f(i, j))));
        }
    }
    return worst;
}

namespace {

// psi_u^2/2 - psi_uu on the lattice interior (centered differences);
// outer ring left as NaN and never read.
Field2D conserved_u_density(const Field2D& f) {
    const int n = f.n();
    const double h = f.h();
    Field2D a(f.lattice(), std::nan(""));
    for (int i = 1; i < n - 1; ++i)
        for (int j = 0; j < n; ++j) {
            const double du = (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
            const double duu = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (h * h);
            a.at(i, j) = 0.5 * du * du - duu;
        }
    return a;
}

Field2D conserved_v_density(const Field2D& f) {
    const int n = f.n();
    const double h = f.h();
    Field2D b(f.lattice(), std::nan(""));
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n - 1; ++j) {
            const double dv = (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
            const double dvv = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (h * h);
            b.at(i, j) = 0.5 * dv * dv - dvv;
        }
    return b;
}

} // namespace

std::pair<double, double> conservation_residual(const Field2D& f) {
    const int n = f.n();
    if (n < 7) throw std::invalid_argument("conservation_residual: need n >= 7");
    const double h = f.h();
    const Field2D a = conserved_u_density(f);
    const Field2D b = conserved_v_density(f);
    double worst_u = 0.0, worst_v = 0.0;
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j) {
            worst_u = std::max(worst_u, std::abs((a(i, j + 1) - a(i, j - 1)) / (2.0 * h)));
            worst_v = std::max(worst_v, std::abs((b(i + 1, j) - b(i - 1, j)) / (2.0 * h)));
        }
    return {worst_u, worst_v};
}

double conserved_u_variation(const Field2D& f) {
    const int n = f.n();
    if (n < 5) throw std::invalid_argument("conserved_u_variation: need n >= 5");
    const Field2D a = conserved_u_density(f);
    double worst = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        double lo = a(i, 0), hi = a(i, 0);
        for (int j = 0; j < n; ++j) {
            lo = std::min(lo, a(i, j));
            hi = std::max(hi, a(i, j));
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

double lorentz_eval(const LorentzProfile& prof, CartesianPoint p) {
    if (!(prof.a > 0.0)) throw std::invalid_argument("lorentz_eval: a must be > 0");
    if (!(std::abs(prof.speed) < 1.0))
        throw std::invalid_argument("lorentz_eval: need |speed| < 1");
    const double gamma = 1.0 / std::sqrt(1.0 - prof.speed * prof.speed);
    const double arg = prof.a * gamma * ((p.t - prof.t0) - prof.speed * (p.x - prof.x0));
    return std::log(2.0 * prof.a * prof.a) - 2.0 * log_cosh(arg);
}

double f_p(double s, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("f_p: p must be > 1");
    const double base = 1.0 + s / p;
    if (base < 0.0) throw std::domain_error("f_p: requires 1 + s/p >= 0");
    return s * std::pow(base, p - 1.0);
}

double almost_conservation_residual(const Field2D& f, double p) {
    const int n = f.n();
    if (n < 7) throw std::invalid_argument("almost_conservation_residual: need n >= 7");
    const double h = f.h();
    const Field2D a = conserved_u_density(f);
    double worst = 0.0;
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j) {
            const double dva = (a(i, j + 1) - a(i, j - 1)) / (2.0 * h);
            const double psi_v = (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
            worst = std::max(worst, std::abs(dva + f_p(f(i, j), p) * psi_v / (4.0 * p)));
        }
    return worst;
}

} // namespace bw
