#include "sphcover/sampling.hpp"

#include "sphcover/errors.hpp"

#include <algorithm>
#include <future>
#include <vector>

namespace sphcover {

Vec sample_sphere(int d, Rng& rng)
{
    if (d < 2) {
        throw InvalidArgument("sphere dimension must be at least 2");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec v(d);
    double norm = 0.0;
    do {
        for (int k = 0; k < d; ++k) {
            v[k] = normal(rng);
        }
        norm = v.norm();
    } while (norm < 1e-300);
    return v / norm;
}

namespace {

struct ShardHit {
    std::uint64_t index = 0; // position within the shard
    Vec point;
};

std::optional<ShardHit> run_shard(const Constellation& cst, std::uint64_t seed,
                                  std::uint64_t shard, std::uint64_t count)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
    Rng rng(seq);
    for (std::uint64_t k = 0; k < count; ++k) {
        Vec x = sample_sphere(cst.dim(), rng);
        if (cst.margin(x) < 0.0) {
            return ShardHit{k, std::move(x)};
        }
    }
    return std::nullopt;
}

} // namespace

McVerdict mc_verify(const Constellation& cst, std::uint64_t samples, std::uint64_t seed,
                    unsigned threads)
{
    if (samples < 1) {
        throw InvalidArgument("mc_verify needs at least one sample");
    }
    McVerdict verdict;
    verdict.seed = seed;
    const std::uint64_t shards = (samples + kMcShardSize - 1) / kMcShardSize;
    const std::uint64_t batch = std::max(1u, threads);

    for (std::uint64_t first = 0; first < shards; first += batch) {
        const std::uint64_t last = std::min(shards, first + batch);
        std::vector<std::optional<ShardHit>> hits(last - first);
        auto work = [&](std::uint64_t s) {
            const std::uint64_t count = std::min(kMcShardSize, samples - s * kMcShardSize);
            hits[s - first] = run_shard(cst, seed, s, count);
        };
        if (batch == 1) {
            work(first);
        } else {
            std::vector<std::future<void>> jobs;
            for (std::uint64_t s = first; s < last; ++s) {
                jobs.push_back(std::async(std::launch::async, work, s));
            }
            for (auto& j : jobs) {
                j.get();
            }
        }
        for (std::uint64_t s = first; s < last; ++s) {
            if (auto& hit = hits[s - first]) {
                verdict.no_counterexample = false;
                verdict.witness = std::move(hit->point);
                verdict.samples_used = s * kMcShardSize + hit->index + 1;
                return verdict;
            }
        }
    }
    verdict.samples_used = samples;
    return verdict;
}

} // namespace sphcover
