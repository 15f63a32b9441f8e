#include "bw/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace bw {

namespace {

// Quintic smoothstep 1 -> 0 on y in [0,1]; C2 at both ends.
double smooth_down(double y) {
    if (y <= 0.0) return 1.0;
    if (y >= 1.0) return 0.0;
    return 1.0 - y * y * y * (10.0 + y * (-15.0 + 6.0 * y));
}
double smooth_down_prime(double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    return -30.0 * y * y * (1.0 - y) * (1.0 - y);
}
double smooth_down_second(double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    return -60.0 * y * (1.0 - y) * (1.0 - 2.0 * y);
}

} // namespace

InitialData InitialData::from_closed_form(ClosedForm f, double support_radius, double taper_width) {
    if (!(support_radius > 0.0) || !(taper_width > 0.0))
        throw std::invalid_argument("InitialData: support_radius and taper_width must be > 0");
    InitialData d;
    d.f_ = std::move(f);
    d.radius_ = support_radius;
    d.taper_ = taper_width;
    return d;
}

InitialData InitialData::from_samples(const std::vector<double>& x, const std::vector<double>& phi0,
                                      const std::vector<double>& phi1, double support_radius,
                                      double taper_width) {
    auto s0 = std::make_shared<CubicSpline>(x, phi0);
    auto s1 = std::make_shared<CubicSpline>(x, phi1);
    ClosedForm f;
    f.phi0 = [s0](double y) { return s0->value(y); };
    f.phi0_prime = [s0](double y) { return s0->derivative(y); };
    f.phi0_second = [s0](double y) { return s0->second_derivative(y); };
    f.phi1 = [s1](double y) { return s1->value(y); };
    f.phi1_prime = [s1](double y) { return s1->derivative(y); };
    return from_closed_form(std::move(f), support_radius, taper_width);
}

double InitialData::cutoff(double x) const {
    return smooth_down((std::abs(x) - radius_) / taper_);
}
double InitialData::cutoff_prime(double x) const {
    const double s = x < 0.0 ? -1.0 : 1.0;
    return s * smooth_down_prime((std::abs(x) - radius_) / taper_) / taper_;
}
double InitialData::cutoff_second(double x) const {
    return smooth_down_second((std::abs(x) - radius_) / taper_) / (taper_ * taper_);
}

double InitialData::phi0(double x) const {
    if (std::abs(x) >= radius_ + taper_) return 0.0;
    const double c = cutoff(x);
    return c == 0.0 ? 0.0 : f_.phi0(x) * c;
}

double InitialData::phi0_prime(double x) const {
    if (std::abs(x) >= radius_ + taper_) return 0.0;
    if (std::abs(x) <= radius_) return f_.phi0_prime(x);
    return f_.phi0_prime(x) * cutoff(x) + f_.phi0(x) * cutoff_prime(x);
}

double InitialData::phi0_second(double x) const {
    if (std::abs(x) >= radius_ + taper_) return 0.0;
    if (std::abs(x) <= radius_) return f_.phi0_second(x);
    return f_.phi0_second(x) * cutoff(x) + 2.0 * f_.phi0_prime(x) * cutoff_prime(x) +
           f_.phi0(x) * cutoff_second(x);
}

double InitialData::phi1(double x) const {
    if (std::abs(x) >= radius_ + taper_) return 0.0;
    const double c = cutoff(x);
    return c == 0.0 ? 0.0 : f_.phi1(x) * c;
}

double InitialData::phi1_prime(double x) const {
    if (std::abs(x) >= radius_ + taper_) return 0.0;
    if (std::abs(x) <= radius_) return f_.phi1_prime(x);
    return f_.phi1_prime(x) * cutoff(x) + f_.phi1(x) * cutoff_prime(x);
}

double InitialData::sup_phi0(int samples) const {
    const double R = zero_radius();
    double m = 0.0;
    for (int k = 0; k <= samples; ++k) {
        const double x = -R + 2.0 * R * k / samples;
        m = std::max(m, std::abs(phi0(x)));
    }
    return m;
}

void InitialData::require_barrier_condition() const {
    if (sup_phi0() >= 1.0)
        throw std::domain_error("initial data violate the strict barrier condition sup|phi0| < 1");
}

NondegeneracyReport check_nondegeneracy(const InitialData& data, std::pair<double, double> interval,
                                        double tol, int samples) {
    if (!(tol > 0.0)) throw std::invalid_argument("check_nondegeneracy: tol must be > 0");
    if (samples < 2) throw std::invalid_argument("check_nondegeneracy: need samples >= 2");
    const auto [lo, hi] = interval;
    if (!(hi > lo)) throw std::invalid_argument("check_nondegeneracy: empty interval");

    NondegeneracyReport rep;
    auto scan = [&](int sign, std::vector<std::pair<double, double>>& out) {
        bool in_zero = false;
        double start = lo;
        for (int k = 0; k <= samples; ++k) {
            const double x = lo + (hi - lo) * k / samples;
            const double g = 0.5 * (data.phi1(x) + sign * data.phi0_prime(x));
            const bool z = std::abs(g) <= tol;
            if (z && !in_zero) {
                in_zero = true;
                start = x;
            } else if (!z && in_zero) {
                in_zero = false;
                out.emplace_back(start, lo + (hi - lo) * (k - 1) / double(samples));
            }
        }
        if (in_zero) out.emplace_back(start, hi);
    };
    scan(+1, rep.plus_zero_intervals);
    scan(-1, rep.minus_zero_intervals);
    rep.component_count =
        static_cast<int>(rep.plus_zero_intervals.size() + rep.minus_zero_intervals.size());
    return rep;
}

} // namespace bw
