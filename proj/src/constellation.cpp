#include "sphcover/constellation.hpp"

#include "four_d_85_data.hpp"
#include "sphcover/errors.hpp"
#include "sphcover/io.hpp"
#include "sphcover/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace sphcover {

void RelaxConfig::validate() const
{
    if (d < 2 || n < 2) {
        throw InvalidArgument("relaxation needs n >= 2 points in dimension d >= 2");
    }
    if (max_iter < 0 || !(tol > 0.0) || initial_step < 0.0 || !(grow >= 1.0) ||
        !(cut > 0.0 && cut < 1.0)) {
        throw InvalidArgument("relaxation tolerances must be positive");
    }
}

double coulomb_energy(const std::vector<Vec>& points)
{
    double e = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            e += 1.0 / (points[i] - points[j]).norm();
        }
    }
    return e;
}

namespace {

std::vector<Vec> tangent_forces(const std::vector<Vec>& pts)
{
    std::vector<Vec> f(pts.size(), Vec::Zero(pts.front().size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Vec diff = pts[i] - pts[j];
            const double r = diff.norm();
            const Vec push = diff / (r * r * r);
            f[i] += push;
            f[j] -= push;
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        f[i] -= f[i].dot(pts[i]) * pts[i];
    }
    return f;
}

} // namespace

RelaxResult relax(const RelaxConfig& cfg)
{
    cfg.validate();
    Rng rng(cfg.seed);
    RelaxResult res;
    res.points.reserve(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
        res.points.push_back(sample_sphere(cfg.d, rng));
    }
    double energy = coulomb_energy(res.points);
    res.initial_energy = energy;

    double step = cfg.initial_step > 0.0 ? cfg.initial_step : 0.1 / cfg.n;
    std::vector<Vec> forces = tangent_forces(res.points);
    std::vector<Vec> trial(res.points.size());
    for (int it = 0; it < cfg.max_iter; ++it) {
        res.iterations = it + 1;
        double moved = 0.0;
        for (std::size_t i = 0; i < trial.size(); ++i) {
            trial[i] = res.points[i] + step * forces[i];
            trial[i] /= trial[i].norm();
            moved = std::max(moved, (trial[i] - res.points[i]).norm());
        }
        const double trial_energy = coulomb_energy(trial);
        if (trial_energy < energy) {
            res.points.swap(trial);
            energy = trial_energy;
            forces = tangent_forces(res.points);
            step *= cfg.grow;
            if (moved < cfg.tol) {
                res.converged = true;
                break;
            }
        } else {
            step *= cfg.cut;
            if (moved < cfg.tol) {
                // Even the rejected move was below tolerance: no further progress possible.
                res.converged = true;
                break;
            }
        }
    }
    res.final_energy = energy;
    return res;
}

std::uint64_t attempt_seed(std::uint64_t seed, int n, int restart)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(restart)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

namespace {

struct Trial {
    BoundAttempt attempt;
    std::vector<Vec> points;
};

Trial run_attempt(const BoundConfig& cfg, int n, int restart)
{
    RelaxConfig rc = cfg.relax;
    rc.n = n;
    rc.d = cfg.d;
    rc.seed = attempt_seed(cfg.seed, n, restart);
    RelaxResult rr = relax(rc);
    const Constellation cst = Constellation::uniform(cfg.d, rr.points, cfg.theta);
    CoverConfig cover_cfg = cfg.cover;
    cover_cfg.threads = 1;
    Trial t;
    t.attempt = {n, restart, rc.seed, cover(cst, cover_cfg).covered, rr.converged};
    t.points = std::move(rr.points);
    return t;
}

} // namespace

BoundSearchResult bound_search(const BoundConfig& cfg)
{
    if (cfg.n_start < cfg.d || cfg.restarts < 1 || cfg.patience < 1) {
        throw InvalidArgument("bound search needs n_start >= d, restarts >= 1 and patience >= 1");
    }
    BoundSearchResult res;
    res.dim = cfg.d;
    res.theta = cfg.theta;
    const int batch = static_cast<int>(std::max(1u, cfg.threads));

    int misses = 0;
    for (int n = cfg.n_start; n >= cfg.d; --n) {
        bool found = false;
        for (int first = 0; first < cfg.restarts && !found; first += batch) {
            const int last = std::min(cfg.restarts, first + batch);
            std::vector<Trial> trials(static_cast<std::size_t>(last - first));
            if (batch == 1) {
                trials[0] = run_attempt(cfg, n, first);
            } else {
                std::vector<std::future<Trial>> jobs;
                for (int r = first; r < last; ++r) {
                    jobs.push_back(std::async(std::launch::async, run_attempt, std::cref(cfg), n, r));
                }
                for (std::size_t k = 0; k < jobs.size(); ++k) {
                    trials[k] = jobs[k].get();
                }
            }
            for (auto& t : trials) {
                res.log.push_back(t.attempt);
                if (t.attempt.covered) {
                    res.m_u = n;
                    res.failed_n = 0;
                    res.covering = std::move(t.points);
                    found = true;
                    break;
                }
            }
        }
        if (found) {
            misses = 0;
            continue;
        }
        if (res.m_u == 0) {
            throw NoCoveringFound("no covering constellation found at n = " +
                                  std::to_string(cfg.n_start));
        }
        if (res.failed_n == 0) {
            res.failed_n = n;
        }
        if (++misses >= cfg.patience) {
            break;
        }
    }
    return res;
}

std::string_view four_d_85_text()
{
    return kFourD85Text;
}

Constellation builtin_four_d_85()
{
    std::istringstream in{std::string(four_d_85_text())};
    return to_constellation(read_constellation_file(in), std::sqrt(3.0) / 2.0);
}

} // namespace sphcover
