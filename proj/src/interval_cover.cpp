#include "sphcover/interval_cover.hpp"

#include "sphcover/errors.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace sphcover {

LineVerdict cover_line(std::span<const LineRegion> regions, double eps)
{
    if (regions.empty()) {
        throw InvalidArgument("cover_line needs at least one region");
    }

    double gap_lo = -std::numeric_limits<double>::infinity();
    double gap_hi = std::numeric_limits<double>::infinity();
    double max_hi = -std::numeric_limits<double>::infinity();
    bool any_external = false;
    std::vector<LineRegion> internal;
    internal.reserve(regions.size());
    for (const auto& r : regions) {
        max_hi = std::max(max_hi, r.hi());
        if (r.external) {
            any_external = true;
            gap_lo = std::max(gap_lo, r.lo());
            gap_hi = std::min(gap_hi, r.hi());
        } else {
            internal.push_back(r);
        }
    }

    if (!any_external) {
        return {false, max_hi + 1.0};
    }

    std::sort(internal.begin(), internal.end(),
              [](const LineRegion& a, const LineRegion& b) { return a.lo() < b.lo(); });

    double frontier = gap_lo;
    for (const auto& r : internal) {
        if (frontier >= gap_hi - eps) {
            return {true, std::nullopt};
        }
        if (r.lo() > frontier + eps) {
            return {false, frontier};
        }
        frontier = std::max(frontier, r.hi());
    }
    if (frontier >= gap_hi - eps) {
        return {true, std::nullopt};
    }
    return {false, 0.5 * (frontier + gap_hi)};
}

} // namespace sphcover
