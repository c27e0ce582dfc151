#pragma once

#include "sphcover/geometry.hpp"

#include <optional>
#include <span>

namespace sphcover {

/// Closed interval [center - radius, center + radius] (internal) or the closed
/// complement of the open interval (external) on the real line.
struct LineRegion {
    double center;
    double radius;
    bool external;

    double lo() const noexcept { return center - radius; }
    double hi() const noexcept { return center + radius; }
};

struct LineVerdict {
    bool covered = false;
    std::optional<double> uncovered_coord;
};

/// Decides whether the regions cover the real line.
///
/// External regions are intersected first: their complements leave the open
/// gap (c', d') with c' the largest lower end and d' the smallest upper end.
/// Internal intervals are then swept in order of their lower ends, pushing
/// the frontier c' to the right. Touching intervals (within eps) count as
/// covering.
///
/// When the sweep stalls at an interval that starts beyond the frontier, the
/// frontier itself is reported; it is an endpoint of some region. When the
/// sweep ends with the gap still open, its midpoint is reported. With no
/// external region at all, one unit past the largest upper end is reported.
LineVerdict cover_line(std::span<const LineRegion> regions, double eps = kDefaultEps);

} // namespace sphcover
