#pragma once

#include <filesystem>
#include <iosfwd>

#include "bw/geometry.hpp"

namespace bw {

// Field2D on disk, two formats:
//  - CSV "u,v,value", row-major over the lattice (u outer, v inner),
//    full round-trip decimals;
//  - JSON envelope {"lattice": {"u0","v0","r","n"}, "values": [...]} for
//    exact round-trip in reports.

void write_field_csv(const Field2D& f, std::ostream& os);
void write_field_csv(const Field2D& f, const std::filesystem::path& path);
Field2D read_field_csv(std::istream& is);
Field2D read_field_csv(const std::filesystem::path& path);

void write_field_json(const Field2D& f, const std::filesystem::path& path);
Field2D read_field_json(const std::filesystem::path& path);

} // namespace bw
