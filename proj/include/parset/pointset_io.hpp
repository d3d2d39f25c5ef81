#pragma once

#include "parset/core.hpp"

#include <iosfwd>
#include <string>

namespace parset::io {

// CSV: header "x0,...,x{d-1}", one point per row.
PointSet read_csv(std::istream& in);
void write_csv(std::ostream& out, const PointSet& points);

// JSON: array of arrays, one inner array per point.
PointSet read_json(std::istream& in);

/// Dispatches on extension: ".json" is JSON, anything else CSV.
PointSet load_points(const std::string& path);

/// Round-trip float formatting (17 significant digits).
std::string format_double(double value);

}  // namespace parset::io
