#include "sphcover/recursive_cover.hpp"

#include "sphcover/errors.hpp"
#include "sphcover/interval_cover.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace sphcover {

void CoverStats::merge(const CoverStats& other)
{
    recursive_calls += other.recursive_calls;
    max_depth = std::max(max_depth, other.max_depth);
    rotations += other.rotations;
    max_fanout = std::max(max_fanout, other.max_fanout);
}

SubcapResult subcap(const PlaneRegion& i, const PlaneRegion& j, double eps)
{
    if (i.dim() != j.dim()) {
        throw InvalidArgument("subcap regions live in different dimensions");
    }
    const Vec diff = j.center() - i.center();
    const double dist = diff.norm();
    const double ri = i.radius();
    const double rj = j.radius();

    if (dist <= eps) {
        if (std::abs(ri - rj) <= eps) {
            if (i.external() != j.external()) {
                return CoveredByOther{};
            }
            return Duplicate{};
        }
        const bool inside = j.external() ? ri > rj : ri < rj;
        if (inside) {
            return CoveredByOther{};
        }
        return Disjoint{};
    }

    double theta = (ri * ri + dist * dist - rj * rj) / (2.0 * ri * dist);
    Vec axis = diff / dist;
    if (j.external()) {
        theta = -theta;
        axis = -axis;
    }
    if (theta > -1.0 + eps && theta < 1.0 - eps) {
        // Re-normalize so rounding in diff / dist never trips the unit-axis check.
        axis /= axis.norm();
        return Cap(std::move(axis), theta);
    }

    // Spheres disjoint or tangent: S_i lies wholly in R_j or misses its interior.
    // Test the point of S_i orthogonal to the center line, which stays clear of
    // any tangency point.
    const double sample_dist = std::sqrt(dist * dist + ri * ri);
    const bool inside = j.external() ? sample_dist >= rj : sample_dist <= rj;
    if (inside) {
        return CoveredByOther{};
    }
    return Disjoint{};
}

namespace {

class Solver {
public:
    Solver(const CoverConfig& cfg, bool want_witness) : cfg_(cfg), want_witness_(want_witness) {}

    bool solve(const Constellation& cst, int depth, CoverStats& stats,
               std::optional<WitnessTrace>& trace) const
    {
        ++stats.recursive_calls;
        stats.max_depth = std::max(stats.max_depth, depth);
        const int d = cst.dim();

        if (cst.size() == 1) {
            if (want_witness_) {
                TraceBase base;
                base.kind = BaseKind::Antipode;
                base.dim = d;
                base.point = -cst[0].axis();
                trace = WitnessTrace{std::move(base), {}};
            }
            return false;
        }

        auto [clear, rotation] = rotate_clear(cst, cfg_.tol);
        if (rotation) {
            ++stats.rotations;
        }

        std::vector<PlaneRegion> regions;
        regions.reserve(clear.size());
        bool any_external = false;
        for (const auto& cap : clear.caps()) {
            regions.push_back(cap_image(cap, cfg_.tol.eps));
            any_external = any_external || regions.back().external();
        }
        if (!any_external) {
            if (want_witness_) {
                TraceBase base;
                base.kind = BaseKind::InversionCenter;
                base.dim = d;
                base.rotation = rotation;
                trace = WitnessTrace{std::move(base), {}};
            }
            return false;
        }

        if (d == 2) {
            std::vector<LineRegion> line;
            line.reserve(regions.size());
            for (const auto& r : regions) {
                line.push_back({r.center()[0], r.radius(), r.external()});
            }
            const LineVerdict lv = cover_line(line, cfg_.tol.eps);
            if (!lv.covered && want_witness_) {
                TraceBase base;
                base.kind = BaseKind::LineCoordinate;
                base.dim = 2;
                base.line_coord = *lv.uncovered_coord;
                base.rotation = rotation;
                trace = WitnessTrace{std::move(base), {}};
            }
            return lv.covered;
        }

        // Identical spheres: opposite orientations cover the whole hyperplane,
        // equal orientations are redundant.
        std::vector<std::size_t> kept;
        kept.reserve(regions.size());
        for (std::size_t i = 0; i < regions.size(); ++i) {
            bool duplicate = false;
            for (std::size_t k : kept) {
                const auto& a = regions[k];
                const auto& b = regions[i];
                if ((a.center() - b.center()).norm() <= cfg_.tol.eps &&
                    std::abs(a.radius() - b.radius()) <= cfg_.tol.eps) {
                    if (a.external() != b.external()) {
                        return true;
                    }
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) {
                kept.push_back(i);
            }
        }

        auto run_sphere = [&](std::size_t slot, CoverStats& local,
                              std::optional<WitnessTrace>& local_trace) {
            return sphere_covered(regions, kept, slot, d, depth, rotation, local, local_trace);
        };

        if (depth == 0 && cfg_.threads > 1 && kept.size() > 1) {
            return solve_parallel(kept.size(), run_sphere, stats, trace);
        }
        for (std::size_t slot = 0; slot < kept.size(); ++slot) {
            if (!run_sphere(slot, stats, trace)) {
                return false;
            }
        }
        return true;
    }

private:
    // True when sphere kept[slot] is covered by the other regions.
    bool sphere_covered(const std::vector<PlaneRegion>& regions,
                        const std::vector<std::size_t>& kept, std::size_t slot, int d, int depth,
                        const std::optional<PlaneRotation>& rotation, CoverStats& stats,
                        std::optional<WitnessTrace>& trace) const
    {
        const std::size_t i = kept[slot];
        const PlaneRegion& ri = regions[i];
        std::vector<Cap> caps;
        for (std::size_t j : kept) {
            if (j == i) {
                continue;
            }
            SubcapResult res = subcap(ri, regions[j], cfg_.tol.eps);
            if (std::holds_alternative<CoveredByOther>(res)) {
                return true;
            }
            if (auto* cap = std::get_if<Cap>(&res)) {
                caps.push_back(std::move(*cap));
            }
        }

        if (caps.empty()) {
            if (want_witness_) {
                TraceBase base;
                base.kind = BaseKind::WholeSphere;
                base.dim = d - 1;
                trace = WitnessTrace{std::move(base), {}};
                push_level(*trace, d, i, ri, rotation);
            }
            return false;
        }

        stats.max_fanout = std::max(stats.max_fanout, caps.size());
        Constellation sub(d - 1, std::move(caps));
        if (solve(sub, depth + 1, stats, trace)) {
            return true;
        }
        if (want_witness_) {
            push_level(*trace, d, i, ri, rotation);
        }
        return false;
    }

    template <typename Fn>
    bool solve_parallel(std::size_t count, Fn& run_sphere, CoverStats& stats,
                        std::optional<WitnessTrace>& trace) const
    {
        // Batches keep the lowest failing index authoritative; stats are only
        // merged up to it so they match the sequential run.
        const std::size_t batch = cfg_.threads;
        for (std::size_t start = 0; start < count; start += batch) {
            const std::size_t stop = std::min(count, start + batch);
            std::vector<CoverStats> local(stop - start);
            std::vector<std::optional<WitnessTrace>> traces(stop - start);
            std::vector<std::future<bool>> jobs;
            jobs.reserve(stop - start);
            for (std::size_t slot = start; slot < stop; ++slot) {
                jobs.push_back(std::async(std::launch::async, [&, slot] {
                    return run_sphere(slot, local[slot - start], traces[slot - start]);
                }));
            }
            std::vector<char> ok;
            ok.reserve(jobs.size());
            for (auto& job : jobs) {
                ok.push_back(job.get());
            }
            for (std::size_t k = 0; k < ok.size(); ++k) {
                stats.merge(local[k]);
                if (!ok[k]) {
                    trace = std::move(traces[k]);
                    return false;
                }
            }
        }
        return true;
    }

    static void push_level(WitnessTrace& trace, int d, std::size_t i, const PlaneRegion& region,
                           const std::optional<PlaneRotation>& rotation)
    {
        TraceLevel level;
        level.dim = d;
        level.sphere = i;
        level.center = region.center();
        level.radius = region.radius();
        level.rotation = rotation;
        trace.levels.push_back(std::move(level));
    }

    const CoverConfig& cfg_;
    bool want_witness_;
};

} // namespace

Verdict cover(const Constellation& cst, const CoverConfig& cfg, bool want_witness)
{
    Verdict verdict;
    Solver solver(cfg, want_witness);
    verdict.covered = solver.solve(cst, 0, verdict.stats, verdict.trace);
    if (verdict.covered) {
        verdict.trace.reset();
    }
    return verdict;
}

} // namespace sphcover
