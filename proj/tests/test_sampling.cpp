#include "doctest.h"

#include "oracles.hpp"
#include "random_instances.hpp"
#include "sphcover/constellation.hpp"
#include "sphcover/recursive_cover.hpp"
#include "sphcover/sampling.hpp"
#include "sphcover/witness.hpp"

#include <cmath>
#include <numbers>

using namespace sphcover;

namespace {

Constellation three_caps(double theta)
{
    std::vector<Vec> axes;
    for (int k = 0; k < 3; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 3.0;
        Vec t(2);
        t << std::cos(a), std::sin(a);
        axes.push_back(t);
    }
    return Constellation::uniform(2, axes, theta);
}

} // namespace

TEST_CASE("sample_sphere")
{
    Rng rng(123);
    Vec sum = Vec::Zero(3);
    const int count = 100000;
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const Vec x = sample_sphere(3, rng);
        worst = std::max(worst, std::abs(x.norm() - 1.0));
        sum += x;
    }
    CHECK(worst <= 1e-12);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(sum[k] / count) < 0.02);
    }

    Rng a(5);
    Rng b(5);
    for (int k = 0; k < 100; ++k) {
        CHECK(sample_sphere(5, a) == sample_sphere(5, b));
    }
    CHECK_THROWS(sample_sphere(1, a));
}

TEST_CASE("mc_verify: worked examples")
{
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        const auto v = mc_verify(three_caps(0.6), 10000, seed);
        CHECK_FALSE(v.no_counterexample);
        REQUIRE(v.witness.has_value());
        CHECK(verify_witness(three_caps(0.6), *v.witness).valid);
        CHECK(v.seed == seed);
    }
    const auto covered = mc_verify(three_caps(0.4), 200000, 3);
    CHECK(covered.no_counterexample);
    CHECK_FALSE(covered.witness.has_value());
    CHECK(covered.samples_used == 200000);
}

TEST_CASE("mc_verify is deterministic and independent of threads")
{
    const Constellation big = builtin_four_d_85();
    const auto a = mc_verify(big, 300000, 7, 1);
    const auto b = mc_verify(big, 300000, 7, 1);
    const auto c = mc_verify(big, 300000, 7, 4);
    CHECK(a.no_counterexample == b.no_counterexample);
    CHECK(a.no_counterexample == c.no_counterexample);
    CHECK(a.samples_used == c.samples_used);
    if (a.witness) {
        CHECK(*a.witness == *b.witness);
        CHECK(*a.witness == *c.witness);
    }
}

TEST_CASE("mc_verify never refutes a covered instance")
{
    std::mt19937_64 rng(808);
    int covered = 0;
    int instances = 0;
    while (instances < 200) {
        const int d = 2 + instances % 3;
        const auto cst = testing_support::random_instance(rng, d, 4 * d * d);
        ++instances;
        const bool ok = cover(cst).covered;
        const auto mc = mc_verify(cst, 5000, instances);
        if (ok) {
            ++covered;
            CHECK(mc.no_counterexample);
        }
        if (!mc.no_counterexample) {
            CHECK_FALSE(ok);
            CHECK(verify_witness(cst, *mc.witness).valid);
        }
    }
    CHECK(covered > 40);
}
