#include "doctest.h"

#include "sphcover/constellation.hpp"
#include "sphcover/errors.hpp"
#include "sphcover/recursive_cover.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

using namespace sphcover;

namespace {

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

double angle_between(const Vec& a, const Vec& b)
{
    return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

} // namespace

TEST_CASE("relax: known minima")
{
    RelaxConfig two;
    two.n = 2;
    two.d = 2;
    two.seed = 4;
    const auto r2 = relax(two);
    CHECK(std::abs(angle_between(r2.points[0], r2.points[1]) - std::numbers::pi) <= 1e-3);

    RelaxConfig three;
    three.n = 3;
    three.d = 2;
    three.seed = 4;
    const auto r3 = relax(three);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            CHECK(std::abs(angle_between(r3.points[i], r3.points[j]) - 2.0 * std::numbers::pi / 3.0) <=
                  1e-3);
        }
    }

    RelaxConfig tet;
    tet.n = 4;
    tet.d = 3;
    tet.seed = 4;
    const auto r4 = relax(tet);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(r4.points[i].norm() - 1.0) <= 1e-12);
        for (int j = i + 1; j < 4; ++j) {
            CHECK(std::abs(r4.points[i].dot(r4.points[j]) + 1.0 / 3.0) <= 1e-2);
        }
    }
}

TEST_CASE("relax: determinism and energy descent")
{
    RelaxConfig cfg;
    cfg.n = 12;
    cfg.d = 3;
    cfg.seed = 77;
    const auto a = relax(cfg);
    const auto b = relax(cfg);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
    }
    CHECK(a.final_energy <= a.initial_energy);
    CHECK(a.final_energy == doctest::Approx(coulomb_energy(a.points)));
    // Icosahedron energy for 12 charges on the sphere.
    CHECK(a.final_energy == doctest::Approx(49.165253058).epsilon(1e-6));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RelaxConfig c;
        c.n = 9;
        c.d = 4;
        c.seed = seed;
        c.max_iter = 200;
        const auto r = relax(c);
        CHECK(r.final_energy <= r.initial_energy);
    }

    RelaxConfig bad;
    bad.n = 1;
    CHECK_THROWS_AS(relax(bad), InvalidArgument);
}

TEST_CASE("bound_search in the plane")
{
    BoundConfig cfg;
    cfg.d = 2;
    cfg.theta = 0.5;
    cfg.n_start = 4;
    cfg.restarts = 5;
    cfg.seed = 1;
    const auto res = bound_search(cfg);
    CHECK(res.m_u == 3);
    CHECK(res.failed_n == 2);
    REQUIRE(res.covering.size() == 3);
    CHECK(cover(Constellation::uniform(2, res.covering, 0.5)).covered);
    CHECK(res.log.front().n == 4);
    CHECK(res.log.back().n == 2);

    cfg.threads = 3;
    const auto again = bound_search(cfg);
    CHECK(again.m_u == res.m_u);
    CHECK(again.log.size() == res.log.size());

    BoundConfig hopeless;
    hopeless.d = 3;
    hopeless.theta = 0.9;
    hopeless.n_start = 5;
    hopeless.restarts = 2;
    CHECK_THROWS_AS(bound_search(hopeless), NoCoveringFound);
}

TEST_CASE("attempt seeds differ")
{
    CHECK(attempt_seed(1, 20, 0) != attempt_seed(1, 20, 1));
    CHECK(attempt_seed(1, 20, 0) != attempt_seed(1, 21, 0));
    CHECK(attempt_seed(1, 20, 0) != attempt_seed(2, 20, 0));
    CHECK(attempt_seed(1, 20, 0) == attempt_seed(1, 20, 0));
}

TEST_CASE("embedded 85-point constellation")
{
    const Constellation c = builtin_four_d_85();
    CHECK(c.size() == 85);
    CHECK(c.dim() == 4);
    for (const auto& cap : c.caps()) {
        CHECK(cap.threshold() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    }
    Vec first(4);
    first << 0.911722, 0.083517, -0.402106, 0.009974;
    CHECK((c[0].axis() - first).norm() <= 1e-4);

    Vec p(4);
    p << 0.134309, 0.457496, -0.791181, -0.383002;
    double best = -1.0;
    for (const auto& cap : c.caps()) {
        best = std::max(best, cap.axis().dot(p));
    }
    CHECK(best == doctest::Approx(0.865901).epsilon(2e-6));

    CHECK(fnv1a(four_d_85_text()) == 0xd18c23a960129709ull);

    // Raw rows as printed carry six decimals, so norms are only close to one.
    std::istringstream in{std::string(four_d_85_text())};
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("dim", 0) == 0) {
            continue;
        }
        std::istringstream cols(line);
        double x = 0.0;
        double sq = 0.0;
        while (cols >> x) {
            sq += x * x;
        }
        CHECK(std::abs(std::sqrt(sq) - 1.0) <= 1e-4);
        ++rows;
    }
    CHECK(rows == 85);
}
