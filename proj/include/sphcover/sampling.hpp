#pragma once

#include "sphcover/geometry.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace sphcover {

/// Generator used for every seeded stream in the library: 64-bit Mersenne twister.
using Rng = std::mt19937_64;

/// Uniform point on the unit sphere in R^d (normalized standard Gaussian).
Vec sample_sphere(int d, Rng& rng);

struct McVerdict {
    bool no_counterexample = true;
    std::optional<Vec> witness;
    std::uint64_t samples_used = 0;
    std::uint64_t seed = 0;
};

/// Samples are drawn in fixed shards of this many points; shard s uses its own
/// generator seeded from (seed, s), so results do not depend on thread count.
inline constexpr std::uint64_t kMcShardSize = 1u << 16;

/// Monte Carlo falsification: reports the first sampled point outside every
/// cap, in sample order. A covered instance always yields no_counterexample.
McVerdict mc_verify(const Constellation& cst, std::uint64_t samples, std::uint64_t seed,
                    unsigned threads = 1);

} // namespace sphcover
