#include "bw/field_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "bw/numerics.hpp"

namespace bw {

void write_field_csv(const Field2D& f, std::ostream& os) {
    os << "u,v,value\n";
    const int n = f.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            os << format_double(f.lattice().u(i)) << ',' << format_double(f.lattice().v(j)) << ','
               << format_double(f(i, j)) << '\n';
}

void write_field_csv(const Field2D& f, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    write_field_csv(f, os);
}

Field2D read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("u,v,value", 0) != 0)
        throw std::runtime_error("field CSV: missing 'u,v,value' header");
    std::vector<double> us, vs, vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double u, v, w;
        char c1, c2;
        if (!(ss >> u >> c1 >> v >> c2 >> w) || c1 != ',' || c2 != ',')
            throw std::runtime_error("field CSV: malformed row: " + line);
        us.push_back(u);
        vs.push_back(v);
        vals.push_back(w);
    }
    const std::size_t total = vals.size();
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(total))));
    if (n < 2 || n * n != total)
        throw std::runtime_error("field CSV: row count is not a square >= 4");
    const double u0 = us[total - 1], v0 = vs[n - 1];
    const double r = u0 - us[0];
    if (!(r > 0.0)) throw std::runtime_error("field CSV: degenerate lattice");
    NullLattice lat({u0, v0, r}, static_cast<int>(n));
    const double tol = 1e-9 * std::max(1.0, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t k = i * n + j;
            if (std::abs(us[k] - lat.u(int(i))) > tol || std::abs(vs[k] - lat.v(int(j))) > tol)
                throw std::runtime_error("field CSV: rows are not a row-major uniform lattice");
        }
    return Field2D(lat, std::move(vals));
}

Field2D read_field_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    return read_field_csv(is);
}

void write_field_json(const Field2D& f, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["lattice"] = {{"u0", f.lattice().diamond().u0},
                    {"v0", f.lattice().diamond().v0},
                    {"r", f.lattice().diamond().r},
                    {"n", f.n()}};
    j["values"] = f.values();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << j.dump(1) << '\n';
}

Field2D read_field_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    nlohmann::json j;
    is >> j;
    const auto& l = j.at("lattice");
    NullLattice lat({l.at("u0").get<double>(), l.at("v0").get<double>(), l.at("r").get<double>()},
                    l.at("n").get<int>());
    return Field2D(lat, j.at("values").get<std::vector<double>>());
}

} // namespace bw
