#pragma once

#include "sphcover/geometry.hpp"
#include "sphcover/recursive_cover.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace sphcover {

/// Electrostatic relaxation of n equal charges on the unit sphere in R^d.
struct RelaxConfig {
    int n = 2;
    int d = 2;
    std::uint64_t seed = 0;
    int max_iter = 50000;
    double initial_step = 0.0; // 0 selects 0.1 / n
    double grow = 1.1;         // step multiplier after an energy decrease
    double cut = 0.5;          // step multiplier after an energy increase
    double tol = 1e-7;         // stop once the largest accepted move is below this

    void validate() const;
};

struct RelaxResult {
    std::vector<Vec> points;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Coulomb energy sum_{i<j} 1 / |x_i - x_j|.
double coulomb_energy(const std::vector<Vec>& points);

/// Gradient descent on the Coulomb energy: inverse-square repulsion projected
/// onto each tangent space, followed by renormalization. The step grows after
/// every accepted move and is cut after a rejected one, so the energy never
/// increases. Deterministic for a fixed config.
RelaxResult relax(const RelaxConfig& cfg);

struct BoundAttempt {
    int n = 0;
    int restart = 0;
    std::uint64_t seed = 0;
    bool covered = false;
    bool relax_converged = false;
};

struct BoundSearchResult {
    int dim = 0;
    double theta = 0.0;
    int m_u = 0;                 // smallest n with a covering restart
    int failed_n = 0;            // m_u - 1 when every restart failed there, 0 if never tried
    std::vector<Vec> covering;   // the covering constellation found at m_u
    std::vector<BoundAttempt> log;
};

struct BoundConfig {
    int d = 3;
    double theta = 0.0;
    int n_start = 30;
    int restarts = 50;
    /// Consecutive sizes without a covering after which the search stops; 1
    /// stops at the first failure.
    int patience = 3;
    std::uint64_t seed = 0;
    RelaxConfig relax;           // n, d and seed are overwritten per attempt
    CoverConfig cover;
    unsigned threads = 1;
};

/// Seed used for restart r at size n.
std::uint64_t attempt_seed(std::uint64_t seed, int n, int restart);

/// Descending search for the smallest n whose relaxed constellation is covered
/// by caps of threshold theta. At each n restarts are tried in order until one
/// covers. The search stops after `patience` consecutive sizes where none
/// does, since the covering radius of relaxed constellations is not monotone
/// in n. Throws NoCoveringFound if n_start itself never covers.
BoundSearchResult bound_search(const BoundConfig& cfg);

/// Raw text of the embedded 85-point constellation in R^4.
std::string_view four_d_85_text();

/// The embedded constellation with every threshold sqrt(3)/2.
Constellation builtin_four_d_85();

} // namespace sphcover
