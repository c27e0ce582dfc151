#pragma once

#include "sphcover/geometry.hpp"
#include "sphcover/qp.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace sphcover {

/// Parsed constellation text.
///
/// Lines starting with '#' and blank lines are ignored. An optional `dim d`
/// header fixes the dimension; data lines then carry d axis coordinates and
/// optionally a threshold. Without the header every column is a coordinate.
/// Columns are separated by commas and/or whitespace and every data line must
/// have the same column count. Axes within 1e-3 of unit length are normalized,
/// anything else is rejected.
struct ConstellationFile {
    int dim = 0;
    std::vector<Vec> axes;
    std::vector<std::optional<double>> thresholds;
};

ConstellationFile read_constellation_file(std::istream& in);

/// Per-cap thresholds from the file win over `theta`; throws InvalidArgument
/// when a cap has neither.
Constellation to_constellation(const ConstellationFile& file, std::optional<double> theta);

/// Writes a `dim` header and one full-precision row per axis (with the
/// threshold appended when given).
void write_constellation(std::ostream& out, int dim, const std::vector<Vec>& axes,
                         std::optional<double> theta = std::nullopt);

/// Decimal number or the literal `sqrt3/2`.
double parse_theta(std::string_view text);

/// `qp n d c` header followed by n rows of d coefficients and the right-hand side.
QpInstance read_qp(std::istream& in);

/// `graph n` header followed by one 1-based `u v` edge per line.
Graph read_graph(std::istream& in);

} // namespace sphcover
