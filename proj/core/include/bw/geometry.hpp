#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace bw {

// Spacetime is parameterised both by Cartesian (t,x) and null coordinates
// <u,v> with u = t+x, v = t-x. All lattices in this project are rectangular
// in <u,v> over a diamond.

struct CartesianPoint {
    double t = 0.0;
    double x = 0.0;
};

struct NullPoint {
    double u = 0.0;
    double v = 0.0;
};

constexpr NullPoint to_null(CartesianPoint p) { return {p.t + p.x, p.t - p.x}; }
constexpr CartesianPoint to_cartesian(NullPoint q) {
    return {0.5 * (q.u + q.v), 0.5 * (q.u - q.v)};
}

/// Closed diamond { u0-r <= u <= u0, v0-r <= v <= v0 }.
struct Diamond {
    double u0 = 0.0;
    double v0 = 0.0;
    double r = 1.0;

    bool contains(NullPoint p, double tol = 0.0) const {
        return p.u >= u0 - r - tol && p.u <= u0 + tol && p.v >= v0 - r - tol && p.v <= v0 + tol;
    }
    double u_min() const { return u0 - r; }
    double v_min() const { return v0 - r; }
};

/// Uniform n x n lattice over a diamond, spacing h = r/(n-1) in both u and v.
class NullLattice {
public:
    NullLattice(Diamond d, int n);

    double u(int i) const { return dia_.u0 - dia_.r + i * h_; }
    double v(int j) const { return dia_.v0 - dia_.r + j * h_; }
    NullPoint point(int i, int j) const { return {u(i), v(j)}; }
    CartesianPoint cart(int i, int j) const { return to_cartesian(point(i, j)); }

    int n() const { return n_; }
    double h() const { return h_; }
    const Diamond& diamond() const { return dia_; }

    bool operator==(const NullLattice& o) const {
        return dia_.u0 == o.dia_.u0 && dia_.v0 == o.dia_.v0 && dia_.r == o.dia_.r && n_ == o.n_;
    }

private:
    Diamond dia_;
    int n_;
    double h_;
};

/// Scalar field sampled on a null lattice; values[i*n+j] = phi<u_i, v_j>.
class Field2D {
public:
    explicit Field2D(NullLattice lattice, double fill = 0.0);
    Field2D(NullLattice lattice, std::vector<double> values);

    double& at(int i, int j) { return vals_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return vals_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return at(i, j); }

    const NullLattice& lattice() const { return lat_; }
    int n() const { return n_; }
    double h() const { return lat_.h(); }
    const std::vector<double>& values() const { return vals_; }
    std::vector<double>& values() { return vals_; }

    /// Bilinear interpolation at an off-lattice point; throws outside the diamond.
    double interp(NullPoint p) const;
    double interp(CartesianPoint p) const { return interp(to_null(p)); }

    bool all_finite() const;

    template <class F>
    static Field2D sample(NullLattice lattice, F&& f) {
        Field2D out(lattice);
        const int n = lattice.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.at(i, j) = f(lattice.point(i, j));
        return out;
    }

private:
    NullLattice lat_;
    int n_;
    std::vector<double> vals_;
};

/// Discrete (phi_u, phi_v): centered differences inside, one-sided
/// second-order stencils on the edges. Requires n >= 3.
std::pair<Field2D, Field2D> null_derivatives(const Field2D& f);

/// Discrete (phi_uu, phi_vv), second-order. Requires n >= 4.
std::pair<Field2D, Field2D> second_null_derivatives(const Field2D& f);

} // namespace bw
