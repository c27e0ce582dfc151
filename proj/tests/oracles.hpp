#pragma once

// Independent reference computations used only by the tests. Nothing here
// goes through the inversion machinery of the library.

#include "sphcover/geometry.hpp"
#include "sphcover/interval_cover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using sphcover::Vec;

inline double wrap_angle(double a)
{
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

/// Coverage of the unit circle by closed arcs given as (center angle, half width).
/// Arcs are cut at angle 0 and merged by sorting their start angles.
inline bool arcs_cover_circle(const std::vector<std::pair<double, double>>& arcs)
{
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::pair<double, double>> pieces;
    for (auto [center, half] : arcs) {
        if (half >= std::numbers::pi) {
            return true;
        }
        const double lo = wrap_angle(center - half);
        const double hi = lo + 2.0 * half;
        if (hi <= two_pi) {
            pieces.emplace_back(lo, hi);
        } else {
            pieces.emplace_back(lo, two_pi);
            pieces.emplace_back(0.0, hi - two_pi);
        }
    }
    std::sort(pieces.begin(), pieces.end());
    double reach = 0.0;
    for (auto [lo, hi] : pieces) {
        if (lo > reach) {
            return false;
        }
        reach = std::max(reach, hi);
    }
    return reach >= two_pi;
}

/// Arc oracle applied to a 2-D constellation.
inline bool circle_covered(const sphcover::Constellation& cst)
{
    std::vector<std::pair<double, double>> arcs;
    for (const auto& cap : cst.caps()) {
        arcs.emplace_back(std::atan2(cap.axis()[1], cap.axis()[0]), std::acos(cap.threshold()));
    }
    return arcs_cover_circle(arcs);
}

/// Smallest angular gap between arc endpoints (tangency distance) of a 2-D
/// constellation; instances where this is tiny are numerically ambiguous.
inline double min_endpoint_separation(const sphcover::Constellation& cst)
{
    std::vector<double> ends;
    for (const auto& cap : cst.caps()) {
        const double c = std::atan2(cap.axis()[1], cap.axis()[0]);
        const double h = std::acos(cap.threshold());
        ends.push_back(wrap_angle(c - h));
        ends.push_back(wrap_angle(c + h));
    }
    std::sort(ends.begin(), ends.end());
    double best = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k + 1 < ends.size(); ++k) {
        best = std::min(best, ends[k + 1] - ends[k]);
    }
    best = std::min(best, ends.front() + 2.0 * std::numbers::pi - ends.back());
    return best;
}

/// Line coverage by explicit interval union: collect the uncovered set of the
/// externals' gap and subtract the internal intervals one by one.
inline bool line_covered(const std::vector<sphcover::LineRegion>& regions)
{
    double lo = -INFINITY;
    double hi = INFINITY;
    bool any_external = false;
    for (const auto& r : regions) {
        if (r.external) {
            any_external = true;
            lo = std::max(lo, r.lo());
            hi = std::min(hi, r.hi());
        }
    }
    if (!any_external) {
        return false;
    }
    if (lo >= hi) {
        return true;
    }
    // Remaining open gaps, as a list of open intervals.
    std::vector<std::pair<double, double>> gaps{{lo, hi}};
    for (const auto& r : regions) {
        if (r.external) {
            continue;
        }
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : gaps) {
            if (r.hi() <= a || r.lo() >= b) {
                next.emplace_back(a, b);
                continue;
            }
            if (r.lo() > a) {
                next.emplace_back(a, r.lo());
            }
            if (r.hi() < b) {
                next.emplace_back(r.hi(), b);
            }
        }
        gaps = std::move(next);
    }
    return gaps.empty();
}

inline Vec random_unit(int d, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Vec v(d);
    for (int k = 0; k < d; ++k) {
        v[k] = n(rng);
    }
    return v / v.norm();
}

/// Uniformly random orthogonal matrix (QR of a Gaussian matrix with sign fix).
inline Eigen::MatrixXd random_orthogonal(int d, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            g(i, j) = n(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < d; ++k) {
        if (r(k, k) < 0) {
            q.col(k) = -q.col(k);
        }
    }
    return q;
}

} // namespace oracle
