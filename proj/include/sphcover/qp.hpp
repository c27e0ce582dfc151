#pragma once

#include "sphcover/geometry.hpp"
#include "sphcover/recursive_cover.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sphcover {

/// Decision instance: is there x with |x|^2 > c and A x <= b ?
struct QpInstance {
    Eigen::MatrixXd A;
    Vec b;
    double c = 1.0;

    int rows() const { return static_cast<int>(A.rows()); }
    int dim() const { return static_cast<int>(A.cols()); }

    /// Throws InvalidArgument (shape, c <= 0) or ZeroRow.
    void validate() const;
};

/// The constraint (x, axis) <= threshold.
struct HalfSpace {
    Vec axis;
    double threshold;
};

struct QpSettings {
    double tol = 1e-10;
    int max_iter = 100000;
};

/// Unit-norm constraint rows for the instance rescaled to c = 1 (x' = x / sqrt(c)).
std::vector<HalfSpace> normalize_instance(const QpInstance& q);

/// The caps' constraint system (x, t_i) <= theta_i.
std::vector<HalfSpace> halfspaces(const Constellation& cst);

struct MinNormResult {
    bool feasible = false;
    double m = 0.0; // |x_min|^2
    Vec x_min;
};

/// Projection of the origin onto the polyhedron (dual active-set method).
/// Infeasibility is reported through `feasible`; throws MaxIterations.
MinNormResult min_norm_point(std::span<const HalfSpace> cons, const QpSettings& settings = {});

/// Projection of `point` onto the polyhedron.
MinNormResult project_onto(std::span<const HalfSpace> cons, const Vec& point,
                           const QpSettings& settings = {});

struct MaxResult {
    bool unbounded = false;
    double best = 0.0; // M_hat; +inf when unbounded
    Vec x_max;         // feasible; |x_max| > 1 when unbounded
    int starts_used = 0;
    int starts_discarded = 0;
};

/// Origin, +-0.5 e_k, then seeded Gaussian points, `count` in total.
std::vector<Vec> default_starts(int dim, std::size_t count = 16, std::uint64_t seed = 0);

/// Multi-start local maximization of |x|^2 over the polyhedron. Each start is
/// projected onto the polyhedron, then climbs along active-set projected
/// gradients until a KKT point. Returns an infeasible-marker-free result: the
/// caller must ensure the polyhedron is non-empty (run min_norm_point first).
MaxResult heuristic_max(std::span<const HalfSpace> cons, const std::vector<Vec>& starts,
                        const QpSettings& settings = {}, std::uint64_t seed = 0);

struct QpCoverConfig {
    QpSettings settings;
    std::size_t start_count = 16;
    std::uint64_t seed = 0;
    std::vector<Vec> extra_starts;
    double eps = kDefaultEps;
};

/// Outcome of the QP-based check. A COVERED answer is only heuristic: the
/// maximizer may miss the global maximum.
struct QpVerdict {
    bool covered = false;
    bool heuristic = true;
    bool degenerate = false;
    bool infeasible = false;
    double m = 0.0;
    double m_hat = 0.0; // +inf when unbounded
    Vec x_min;
    Vec x_max;
};

QpVerdict cover_qp(const Constellation& cst, const QpCoverConfig& cfg = {});

/// Decides the QP instance through the sphere coverage solver. Throws
/// DegenerateInstance when the polytope is confined to a hyperplane.
bool qp_to_cover(const QpInstance& q, const CoverConfig& cfg = {},
                 const QpSettings& settings = {});

/// Simple undirected graph on vertices 0..n-1.
class Graph {
public:
    explicit Graph(int n);

    void add_edge(int u, int v);
    bool adjacent(int u, int v) const;
    int size() const noexcept { return n_; }
    std::size_t edge_count() const;

private:
    int n_;
    std::vector<char> adj_;
};

/// Box, non-edge and sum constraints whose feasible points with |x|^2 > n - 2/n
/// exist exactly when the graph has a k-clique.
QpInstance clique_instance(const Graph& g, int k);

/// Exhaustive k-clique search; n <= 20.
bool brute_clique(const Graph& g, int k);

} // namespace sphcover
