#include "bw/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace bw {

NullLattice::NullLattice(Diamond d, int n) : dia_(d), n_(n) {
    if (!(d.r > 0.0)) throw std::invalid_argument("NullLattice: diamond radius must be > 0");
    if (n < 2) throw std::invalid_argument("NullLattice: need n >= 2");
    h_ = d.r / static_cast<double>(n - 1);
}

Field2D::Field2D(NullLattice lattice, double fill)
    : lat_(lattice), n_(lattice.n()),
      vals_(static_cast<std::size_t>(n_) * n_, fill) {}

Field2D::Field2D(NullLattice lattice, std::vector<double> values)
    : lat_(lattice), n_(lattice.n()), vals_(std::move(values)) {
    if (vals_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("Field2D: value count does not match lattice");
}

double Field2D::interp(NullPoint p) const {
    const double h = lat_.h();
    const double su = (p.u - lat_.u(0)) / h;
    const double sv = (p.v - lat_.v(0)) / h;
    const double eps = 1e-9;
    if (su < -eps || su > n_ - 1 + eps || sv < -eps || sv > n_ - 1 + eps)
        throw std::out_of_range("Field2D::interp: point outside lattice diamond");
    int i = static_cast<int>(std::floor(su));
    int j = static_cast<int>(std::floor(sv));
    i = std::max(0, std::min(i, n_ - 2));
    j = std::max(0, std::min(j, n_ - 2));
    const double a = su - i;
    const double b = sv - j;
    return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) +
           (1 - a) * b * at(i, j + 1) + a * b * at(i + 1, j + 1);
}

bool Field2D::all_finite() const {
    for (double v : vals_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::pair<Field2D, Field2D> null_derivatives(const Field2D& f) {
    const int n = f.n();
    if (n < 3) throw std::invalid_argument("null_derivatives: lattice too small (n >= 3)");
    const double h = f.h();
    Field2D du(f.lattice()), dv(f.lattice());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == 0)
                du.at(i, j) = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2.0 * h);
            else if (i == n - 1)
                du.at(i, j) = (3.0 * f(n - 1, j) - 4.0 * f(n - 2, j) + f(n - 3, j)) / (2.0 * h);
            else
                du.at(i, j) = (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);

            if (j == 0)
                dv.at(i, j) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * h);
            else if (j == n - 1)
                dv.at(i, j) = (3.0 * f(i, n - 1) - 4.0 * f(i, n - 2) + f(i, n - 3)) / (2.0 * h);
            else
                dv.at(i, j) = (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
        }
    }
    return {std::move(du), std::move(dv)};
}

std::pair<Field2D, Field2D> second_null_derivatives(const Field2D& f) {
    const int n = f.n();
    if (n < 4) throw std::invalid_argument("second_null_derivatives: lattice too small (n >= 4)");
    const double h2 = f.h() * f.h();
    Field2D duu(f.lattice()), dvv(f.lattice());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == 0)
                duu.at(i, j) = (2.0 * f(0, j) - 5.0 * f(1, j) + 4.0 * f(2, j) - f(3, j)) / h2;
            else if (i == n - 1)
                duu.at(i, j) =
                    (2.0 * f(n - 1, j) - 5.0 * f(n - 2, j) + 4.0 * f(n - 3, j) - f(n - 4, j)) / h2;
            else
                duu.at(i, j) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / h2;

            if (j == 0)
                dvv.at(i, j) = (2.0 * f(i, 0) - 5.0 * f(i, 1) + 4.0 * f(i, 2) - f(i, 3)) / h2;
            else if (j == n - 1)
                dvv.at(i, j) =
                    (2.0 * f(i, n - 1) - 5.0 * f(i, n - 2) + 4.0 * f(i, n - 3) - f(i, n - 4)) / h2;
            else
                dvv.at(i, j) = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / h2;
        }
    }
    return {std::move(duu), std::move(dvv)};
}

} // namespace bw
