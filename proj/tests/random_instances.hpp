#pragma once

#include "oracles.hpp"
#include "sphcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testing_support {

using sphcover::Cap;
using sphcover::Constellation;
using sphcover::Vec;

/// Random circle constellation with 1..max_n caps whose arc endpoints are at
/// least min_sep apart. Arc widths are scaled so that roughly half the
/// instances cover.
inline Constellation random_circle_instance(std::mt19937_64& rng, int max_n, double min_sep)
{
    std::uniform_int_distribution<int> count(1, max_n);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> scale(0.8, 4.5);
    for (;;) {
        const int n = count(rng);
        std::vector<Cap> caps;
        for (int k = 0; k < n; ++k) {
            const double half = std::min(3.0, std::numbers::pi / n * scale(rng));
            const double a = angle(rng);
            Vec t(2);
            t << std::cos(a), std::sin(a);
            caps.emplace_back(t, std::cos(half));
        }
        Constellation cst(2, caps);
        if (n == 1 || oracle::min_endpoint_separation(cst) > min_sep) {
            return cst;
        }
    }
}

/// Random constellation in R^d with 2..max_n caps of mixed sizes.
inline Constellation random_instance(std::mt19937_64& rng, int d, int max_n)
{
    std::uniform_int_distribution<int> count(2, std::max(2, max_n));
    const int n = count(rng);
    // Cap area fraction is (1 - theta) / 2 in the plane; use that scale everywhere.
    std::uniform_real_distribution<double> spread(0.8, 4.0);
    std::vector<Cap> caps;
    for (int k = 0; k < n; ++k) {
        const double theta = std::clamp(1.0 - 2.0 * spread(rng) / n * (d - 1), -0.9, 0.95);
        caps.emplace_back(oracle::random_unit(d, rng), theta);
    }
    return Constellation(d, caps);
}

} // namespace testing_support
