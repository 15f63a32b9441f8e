#include "bw/limit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "bw/linear_wave.hpp"

namespace bw {

InitialData example13_data(double delta, double support_radius, double taper_width) {
    if (!(delta > 0.0)) throw std::invalid_argument("example13_data: delta must be > 0");
    InitialData::ClosedForm f;
    f.phi0 = [delta](double x) { return 1.0 - delta * (x * x + 3.0); };
    f.phi0_prime = [delta](double x) { return -2.0 * delta * x; };
    f.phi0_second = [delta](double) { return -2.0 * delta; };
    f.phi1 = [delta](double) { return 4.0 * delta; };
    f.phi1_prime = [](double) { return 0.0; };
    return InitialData::from_closed_form(std::move(f), support_radius, taper_width);
}

std::pair<double, ExampleRegion> example_oracle(CartesianPoint p, double delta) {
    if (!(delta > 0.0) || delta > 1e-3 + 1e-15)
        throw std::invalid_argument("example_oracle: delta must lie in (0, 1e-3]");
    const NullPoint q = to_null(p);
    const double tol = 1e-12;
    if (p.t < -tol || std::abs(q.u) > 10.0 + tol || std::abs(q.v) > 10.0 + tol)
        throw std::domain_error("example_oracle: point outside the triangle Delta");

    const double uA = 2.0 - std::sqrt(2.0); // null ray through A; v-analogue through C
    const double circ = (q.u - 2.0) * (q.u - 2.0) + (q.v - 2.0) * (q.v - 2.0);
    const double quad = (p.t - 2.0) * (p.t - 2.0) + p.x * p.x;

    ExampleRegion reg;
    if (q.u >= 2.0) {
        reg = q.v >= 2.0 ? ExampleRegion::V
                         : (q.v >= uA ? ExampleRegion::IV : ExampleRegion::I);
    } else if (q.v >= 2.0) {
        reg = q.u >= uA ? ExampleRegion::III : ExampleRegion::I;
    } else {
        reg = circ <= 2.0 ? ExampleRegion::II : ExampleRegion::I;
    }

    double value = 0.0;
    switch (reg) {
        case ExampleRegion::I: value = 1.0 - delta * (quad - 1.0); break;
        case ExampleRegion::II: value = 1.0 + delta * (quad - 1.0); break;
        case ExampleRegion::III: value = 1.0 + delta * (2.0 * (p.t - 2.0) * p.x - 1.0); break;
        case ExampleRegion::IV: value = 1.0 + delta * (-2.0 * (p.t - 2.0) * p.x - 1.0); break;
        case ExampleRegion::V: value = 1.0 - delta * (quad + 1.0); break;
    }
    return {value, reg};
}

std::vector<double> dalembert_profile_u(const InitialData& data, const std::vector<double>& nodes) {
    // F(u) = phi0(u)/2 + Phi(u)/2 with Phi the antiderivative of phi1 from 0.
    const double R = data.support_radius();
    const double Z = data.zero_radius();
    const std::array<double, 4> knots{-Z, -R, R, Z};
    auto f1 = [&](double y) { return data.phi1(y); };
    std::vector<double> out(nodes.size());
    double phi_acc = integrate_adaptive(f1, 0.0, nodes.empty() ? 0.0 : nodes[0], 1e-12,
                                        std::span<const double>(knots));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k > 0)
            phi_acc += integrate_adaptive(f1, nodes[k - 1], nodes[k], 1e-13,
                                          std::span<const double>(knots));
        out[k] = 0.5 * data.phi0(nodes[k]) + 0.5 * phi_acc;
    }
    return out;
}

std::vector<double> dalembert_profile_v(const InitialData& data, const std::vector<double>& nodes) {
    // G(v) = phi0(-v)/2 - Phi(-v)/2, since the second d'Alembert component is
    // a function of x - t = -v.
    const double R = data.support_radius();
    const double Z = data.zero_radius();
    const std::array<double, 4> knots{-Z, -R, R, Z};
    auto f1 = [&](double y) { return data.phi1(y); };
    std::vector<double> out(nodes.size());
    double phi_acc = integrate_adaptive(f1, 0.0, nodes.empty() ? 0.0 : -nodes[0], 1e-12,
                                        std::span<const double>(knots));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k > 0)
            phi_acc += integrate_adaptive(f1, -nodes[k - 1], -nodes[k], 1e-13,
                                          std::span<const double>(knots));
        out[k] = 0.5 * data.phi0(-nodes[k]) - 0.5 * phi_acc;
    }
    return out;
}

void march_precheck(const InitialData& data, const NullLattice& lat, const MarchLimits& lim) {
    data.require_barrier_condition();
    const Diamond& d = lat.diamond();
    const auto rep_u = check_nondegeneracy(data, {d.u_min(), d.u0}, lim.nondegeneracy_tol);
    const auto rep_v = check_nondegeneracy(data, {d.v_min(), d.v0}, lim.nondegeneracy_tol);
    if (rep_u.component_count > lim.max_zero_components ||
        rep_v.component_count > lim.max_zero_components)
        throw std::domain_error(
            "march_limit: nondegeneracy proxy failed (zero sets of (phi1 +- phi0')/2 have too "
            "many components); the limit is not characterized for such data");
}

double DefectMeasure::total_plus() const {
    double s = 0.0;
    for (double m : mu_plus) s += m;
    return s;
}

double DefectMeasure::total_minus() const {
    double s = 0.0;
    for (double m : mu_minus) s += m;
    return s;
}

double DefectMeasure::min_entry() const {
    double lo = 0.0;
    for (double m : mu_plus) lo = std::min(lo, m);
    for (double m : mu_minus) lo = std::min(lo, m);
    return lo;
}

namespace {

struct DenseSink {
    CharState& st;
    DefectMeasure& df;
    int n;

    void edge(int i, int j, double value) { st.phi.at(i, j) = value; }
    void cell(int i, int j, double, double nw, double se, double value, double mp, double mm) {
        st.phi.at(i, j) = value;
        if (mp != 0.0) df.plus(i - 1, j - 1) = mp;
        if (mm != 0.0) df.minus(i - 1, j - 1) = mm;
        (void)nw;
        (void)se;
    }
};

std::int8_t sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

} // namespace

LimitResult construct_limit(const InitialData& data, const NullLattice& lat,
                            const MarchLimits& lim) {
    const int n = lat.n();
    if (n > 8193)
        throw std::invalid_argument(
            "construct_limit: n > 8193 would materialize too much state; march with a custom sink");
    LimitResult res{CharState(lat), DefectMeasure(lat)};
    DenseSink sink{res.state, res.defect, n};
    march_limit(data, lat, sink, lim);

    CharState& st = res.state;
    const double h = lat.h();
    st.du_mag.assign(n, 0.0);
    st.dv_mag.assign(n, 0.0);
    for (int i = 1; i < n; ++i) st.du_mag[i] = std::abs(st.phi(i, 0) - st.phi(i - 1, 0)) / h;
    for (int j = 1; j < n; ++j) st.dv_mag[j] = std::abs(st.phi(0, j) - st.phi(0, j - 1)) / h;
    if (n > 1) {
        st.du_mag[0] = st.du_mag[1];
        st.dv_mag[0] = st.dv_mag[1];
    }

    st.sig_u.assign(std::size_t(n) * n, 0);
    st.sig_v.assign(std::size_t(n) * n, 0);
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < n; ++j)
            st.sig_u[std::size_t(i) * n + j] = sign_of(st.phi(i, j) - st.phi(i - 1, j));
    for (int j = 0; j < n; ++j) st.sig_u[j] = st.sig_u[std::size_t(1) * n + j];
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j)
            st.sig_v[std::size_t(i) * n + j] = sign_of(st.phi(i, j) - st.phi(i, j - 1));
    for (int i = 0; i < n; ++i) st.sig_v[std::size_t(i) * n] = st.sig_v[std::size_t(i) * n + 1];
    return res;
}

DefectMeasure extract_defect(const Field2D& field) {
    const int n = field.n();
    if (n < 2) throw std::invalid_argument("extract_defect: need n >= 2");
    DefectMeasure df(field.lattice());
    const double floor = 1e-12 * field.h();
    for (int ci = 0; ci < n - 1; ++ci) {
        for (int cj = 0; cj < n - 1; ++cj) {
            const double a = field(ci, cj), b = field(ci + 1, cj), c = field(ci, cj + 1),
                         d = field(ci + 1, cj + 1);
            const double m = -(d - b - c + a);
            if (std::abs(m) <= floor) continue;
            const double mx = std::max(std::max(a, b), std::max(c, d));
            const double mn = std::min(std::min(a, b), std::min(c, d));
            if (mx > 0.0 && mn < 0.0 && std::abs(m) > std::max(floor, 1e-10)) {
                ++df.straddle_flags;
                if (mx >= -mn)
                    df.plus(ci, cj) = m;
                else
                    df.minus(ci, cj) = -m;
            } else if (mx > 0.0) {
                df.plus(ci, cj) = m;
            } else if (mn < 0.0) {
                df.minus(ci, cj) = -m;
            }
        }
    }
    return df;
}

namespace {

double percentile(std::vector<double>& v, double q) {
    if (v.empty()) return 0.0;
    const auto k = static_cast<std::size_t>(q * (v.size() - 1));
    std::nth_element(v.begin(), v.begin() + k, v.end());
    return v[k];
}

} // namespace

PropertyReport check_properties(const Field2D& field, const InitialData& data) {
    PropertyReport rep;
    const int n = field.n();
    if (n < 4) throw std::invalid_argument("check_properties: lattice too small");
    const NullLattice& lat = field.lattice();
    const double h = lat.h();

    // (i) Lipschitz: sup |null edge increment| / h.
    double lip = 0.0;
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < n; ++j)
            lip = std::max(lip, std::abs(field(i, j) - field(i - 1, j)) / h);
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j)
            lip = std::max(lip, std::abs(field(i, j) - field(i, j - 1)) / h);
    rep.lipschitz_constant = lip;

    // Linear null-derivative magnitudes at the lattice nodes.
    std::vector<double> lin_u(n), lin_v(n);
    for (int i = 0; i < n; ++i) lin_u[i] = lin_deriv_u(data, lat.u(i));
    for (int j = 0; j < n; ++j) lin_v[j] = lin_deriv_v(data, lat.v(j));

    // (ii) piecewise smoothness: a new segment starts where the derivative
    // jump across a node exceeds half the local linear magnitude (and a
    // floor that absorbs curvature of the smooth pieces).
    int worst_segments = 1;
    const double jump_floor = 10.0 * h * std::max(lip, 1e-12);
    for (int j = 0; j < n; ++j) {
        int segments = 1;
        for (int i = 1; i + 1 < n; ++i) {
            const double jump = std::abs(field(i + 1, j) - 2.0 * field(i, j) + field(i - 1, j)) / h;
            if (jump > std::max(0.5 * std::abs(lin_u[i]), jump_floor)) ++segments;
        }
        worst_segments = std::max(worst_segments, segments);
    }
    for (int i = 0; i < n; ++i) {
        int segments = 1;
        for (int j = 1; j + 1 < n; ++j) {
            const double jump = std::abs(field(i, j + 1) - 2.0 * field(i, j) + field(i, j - 1)) / h;
            if (jump > std::max(0.5 * std::abs(lin_v[j]), jump_floor)) ++segments;
        }
        worst_segments = std::max(worst_segments, segments);
    }
    rep.piecewise_segments_max = worst_segments;

    // (iii) agreement with the linear solution on the strip where it stays
    // clear of the barrier by half the initial gap.
    std::vector<double> u_nodes(n), v_nodes(n);
    for (int i = 0; i < n; ++i) u_nodes[i] = lat.u(i);
    for (int j = 0; j < n; ++j) v_nodes[j] = lat.v(j);
    const std::vector<double> F = dalembert_profile_u(data, u_nodes);
    const std::vector<double> G = dalembert_profile_v(data, v_nodes);
    const double margin = 0.5 * (1.0 - data.sup_phi0());
    struct Node {
        double abst;
        int i, j;
    };
    std::vector<Node> order;
    order.reserve(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            order.push_back({std::abs(lat.cart(i, j).t), i, j});
    std::sort(order.begin(), order.end(), [](const Node& a, const Node& b) { return a.abst < b.abst; });
    double err = 0.0, t_lin = 0.0;
    for (const Node& nd : order) {
        const double lin = F[nd.i] + G[nd.j];
        if (std::abs(lin) > 1.0 - margin) break;
        err = std::max(err, std::abs(field(nd.i, nd.j) - lin));
        t_lin = nd.abst;
    }
    rep.initial_agreement_error = err;
    rep.t_lin = t_lin;

    // (iv) barrier violation
    double viol = 0.0;
    for (double v : field.values()) viol = std::max(viol, std::abs(v) - 1.0);
    rep.barrier_violation = std::max(0.0, viol);

    // (v) defect sanity: negativity and support distance (in cells) to the
    // near-barrier sets {phi >= 1 - eps} / {phi <= -1 + eps}.
    const DefectMeasure df = extract_defect(field);
    rep.defect_negativity = std::max(0.0, -df.min_entry());
    const double eps_supp = 4.0 * h * std::max(lip, 1e-12);
    const double mass_floor = 1e-12 * h;
    double far = 0.0;
    auto near_barrier = [&](int i, int j, double sign) {
        return sign * field(i, j) >= 1.0 - eps_supp;
    };
    auto support_dist = [&](int ci, int cj, double sign) {
        for (int ring = 0; ring <= 2; ++ring) {
            for (int i = std::max(0, ci - ring); i <= std::min(n - 1, ci + 1 + ring); ++i)
                for (int j = std::max(0, cj - ring); j <= std::min(n - 1, cj + 1 + ring); ++j)
                    if (near_barrier(i, j, sign)) return double(ring);
        }
        return 3.0;
    };
    for (int ci = 0; ci < n - 1; ++ci)
        for (int cj = 0; cj < n - 1; ++cj) {
            if (df.plus(ci, cj) > mass_floor) far = std::max(far, support_dist(ci, cj, +1.0));
            if (df.minus(ci, cj) > mass_floor) far = std::max(far, support_dist(ci, cj, -1.0));
        }
    rep.defect_support_distance = far;

    // (vi) null energy reflection proxy: ||phi_u| - |lin_u|| pooled over
    // interior nodes in both families.
    std::vector<double> devs;
    devs.reserve(2 * std::size_t(n - 2) * (n - 2));
    const double bad_tol = 10.0 * h * std::max(lip, 1e-12);
    std::size_t bad = 0;
    for (int i = 1; i + 1 < n; ++i)
        for (int j = 1; j + 1 < n; ++j) {
            const double du = (field(i + 1, j) - field(i - 1, j)) / (2.0 * h);
            const double dv = (field(i, j + 1) - field(i, j - 1)) / (2.0 * h);
            const double e1 = std::abs(std::abs(du) - std::abs(lin_u[i]));
            const double e2 = std::abs(std::abs(dv) - std::abs(lin_v[j]));
            devs.push_back(e1);
            devs.push_back(e2);
            if (e1 > bad_tol) ++bad;
            if (e2 > bad_tol) ++bad;
        }
    rep.reflection_error_median = percentile(devs, 0.5);
    rep.reflection_error_p95 = percentile(devs, 0.95);
    rep.reflection_error_fraction_bad = devs.empty() ? 0.0 : double(bad) / double(devs.size());
    return rep;
}

double arc_density(const InitialData& data, CartesianPoint arc_point, double arc_slope_dv_du) {
    if (!(arc_slope_dv_du < 0.0))
        throw std::domain_error("arc_density: dv/du must be negative (spacelike arc)");
    const NullPoint q = to_null(arc_point);
    return std::abs(lin_deriv_u(data, q.u)) +
           std::abs(lin_deriv_v(data, q.v)) * std::abs(arc_slope_dv_du);
}

} // namespace bw
