#include "sphcover/qp.hpp"

#include "sphcover/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace sphcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int common_dim(std::span<const HalfSpace> cons)
{
    if (cons.empty()) {
        throw InvalidArgument("constraint system is empty");
    }
    const auto d = cons[0].axis.size();
    for (const auto& h : cons) {
        if (h.axis.size() != d) {
            throw InvalidArgument("constraint rows have inconsistent lengths");
        }
    }
    return static_cast<int>(d);
}

// Columns are the active constraint normals.
Eigen::MatrixXd gather(std::span<const HalfSpace> cons, const std::vector<int>& idx, int d)
{
    Eigen::MatrixXd n(d, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        n.col(static_cast<Eigen::Index>(k)) = cons[idx[k]].axis;
    }
    return n;
}

} // namespace

void QpInstance::validate() const
{
    if (A.rows() < 1 || A.cols() < 1) {
        throw InvalidArgument("QP instance needs at least one row and one column");
    }
    if (b.size() != A.rows()) {
        throw InvalidArgument("QP right-hand side length does not match the row count");
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("QP constant c must be positive");
    }
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (A.row(i).norm() == 0.0) {
            throw ZeroRow("QP row " + std::to_string(i + 1) + " is all zeros");
        }
    }
}

std::vector<HalfSpace> normalize_instance(const QpInstance& q)
{
    q.validate();
    const double scale = std::sqrt(q.c);
    std::vector<HalfSpace> out;
    out.reserve(static_cast<std::size_t>(q.rows()));
    for (Eigen::Index i = 0; i < q.A.rows(); ++i) {
        const double norm = q.A.row(i).norm();
        out.push_back({q.A.row(i).transpose() / norm, q.b[i] / (scale * norm)});
    }
    return out;
}

std::vector<HalfSpace> halfspaces(const Constellation& cst)
{
    std::vector<HalfSpace> out;
    out.reserve(cst.size());
    for (const auto& cap : cst.caps()) {
        out.push_back({cap.axis(), cap.threshold()});
    }
    return out;
}

// Goldfarb-Idnani dual active-set method specialised to the identity Hessian:
// start from the unconstrained minimiser (the origin) and add violated
// constraints one at a time, dropping active ones whose multiplier would turn
// negative. A violated constraint that cannot be satisfied proves infeasibility.
MinNormResult min_norm_point(std::span<const HalfSpace> cons, const QpSettings& settings)
{
    const int d = common_dim(cons);
    Vec x = Vec::Zero(d);
    std::vector<int> active;
    std::vector<double> mult;
    int iterations = 0;

    auto slack = [&](int j) { return cons[j].threshold - cons[j].axis.dot(x); };

    while (true) {
        int p = -1;
        double worst = -settings.tol;
        for (int j = 0; j < static_cast<int>(cons.size()); ++j) {
            const double s = slack(j);
            if (s < worst && std::find(active.begin(), active.end(), j) == active.end()) {
                worst = s;
                p = j;
            }
        }
        if (p < 0) {
            return {true, x.squaredNorm(), x};
        }

        // Multipliers here belong to the ">=" form with normals -a_j.
        const Vec np = -cons[p].axis;
        double mult_p = 0.0;
        while (true) {
            if (++iterations > settings.max_iter) {
                throw MaxIterations("min-norm solver exceeded " +
                                    std::to_string(settings.max_iter) + " iterations");
            }
            Vec z = np;
            Vec r;
            if (!active.empty()) {
                const Eigen::MatrixXd n = -gather(cons, active, d);
                r = (n.transpose() * n).ldlt().solve(n.transpose() * np);
                z -= n * r;
            }

            double t2 = kInf;
            const double zz = z.squaredNorm();
            if (zz > 1e-24) {
                t2 = slack(p) < 0.0 ? -slack(p) / zz : 0.0;
            }
            double t1 = kInf;
            int drop = -1;
            for (int k = 0; k < static_cast<int>(active.size()); ++k) {
                if (r[k] > 1e-14) {
                    const double ratio = mult[k] / r[k];
                    if (ratio < t1) {
                        t1 = ratio;
                        drop = k;
                    }
                }
            }
            const double t = std::min(t1, t2);
            if (!std::isfinite(t)) {
                return {false, 0.0, x};
            }

            for (int k = 0; k < static_cast<int>(active.size()); ++k) {
                mult[k] -= t * r[k];
            }
            mult_p += t;
            if (std::isfinite(t2)) {
                x += t * z;
            }
            if (t2 <= t1) {
                active.push_back(p);
                mult.push_back(mult_p);
                break;
            }
            active.erase(active.begin() + drop);
            mult.erase(mult.begin() + drop);
        }
    }
}

MinNormResult project_onto(std::span<const HalfSpace> cons, const Vec& point,
                           const QpSettings& settings)
{
    std::vector<HalfSpace> shifted(cons.begin(), cons.end());
    for (auto& h : shifted) {
        h.threshold -= h.axis.dot(point);
    }
    MinNormResult res = min_norm_point(shifted, settings);
    res.x_min += point;
    res.m = res.x_min.squaredNorm();
    return res;
}

std::vector<Vec> default_starts(int dim, std::size_t count, std::uint64_t seed)
{
    std::vector<Vec> starts;
    if (count == 0) {
        return starts;
    }
    starts.push_back(Vec::Zero(dim));
    for (int k = 0; k < dim && starts.size() < count; ++k) {
        for (double sign : {0.5, -0.5}) {
            if (starts.size() < count) {
                Vec e = Vec::Zero(dim);
                e[k] = sign;
                starts.push_back(std::move(e));
            }
        }
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.5);
    while (starts.size() < count) {
        Vec v(dim);
        for (int k = 0; k < dim; ++k) {
            v[k] = normal(rng);
        }
        starts.push_back(std::move(v));
    }
    return starts;
}

namespace {

struct Ascent {
    enum class Outcome { LocalMax, Unbounded, Stalled } outcome = Outcome::Stalled;
    Vec x;
};

// Feasible point pushed along x + t d far enough that its norm is at least 2.
Vec far_along(const Vec& x, const Vec& dir)
{
    return x + ((2.0 + x.norm()) / dir.norm()) * dir;
}

Ascent climb(std::span<const HalfSpace> cons, Vec x, const QpSettings& settings)
{
    const int d = static_cast<int>(x.size());
    const double act_tol = 1e-9;
    std::vector<int> work;

    auto add_if_independent = [&](int j) {
        if (static_cast<int>(work.size()) >= d) {
            return false;
        }
        std::vector<int> trial = work;
        trial.push_back(j);
        const Eigen::MatrixXd n = gather(cons, trial, d);
        Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(n);
        qr.setThreshold(1e-10);
        if (qr.rank() == static_cast<Eigen::Index>(trial.size())) {
            work = std::move(trial);
            return true;
        }
        return false;
    };
    for (int j = 0; j < static_cast<int>(cons.size()); ++j) {
        if (std::abs(cons[j].threshold - cons[j].axis.dot(x)) <= act_tol) {
            add_if_independent(j);
        }
    }

    for (int it = 0; it < settings.max_iter; ++it) {
        Vec g = x;
        if (g.norm() < 1e-12) {
            g = Vec::Zero(d);
            g[0] = 1.0;
        }
        Vec p = g;
        Vec lambda;
        if (!work.empty()) {
            const Eigen::MatrixXd n = gather(cons, work, d);
            lambda = (n.transpose() * n).ldlt().solve(n.transpose() * g);
            p = g - n * lambda;
        }

        if (p.norm() <= 1e-10 * std::max(1.0, g.norm())) {
            if (work.empty()) {
                return {Ascent::Outcome::LocalMax, x};
            }
            Eigen::Index worst = 0;
            const double lmin = lambda.minCoeff(&worst);
            if (lmin >= -1e-12) {
                return {Ascent::Outcome::LocalMax, x};
            }
            work.erase(work.begin() + worst);
            continue;
        }

        double step = kInf;
        int blocking = -1;
        for (int j = 0; j < static_cast<int>(cons.size()); ++j) {
            if (std::find(work.begin(), work.end(), j) != work.end()) {
                continue;
            }
            const double rate = cons[j].axis.dot(p);
            if (rate > 1e-14) {
                const double t = std::max(0.0, (cons[j].threshold - cons[j].axis.dot(x)) / rate);
                if (t < step) {
                    step = t;
                    blocking = j;
                }
            }
        }
        if (blocking < 0) {
            return {Ascent::Outcome::Unbounded, far_along(x, p)};
        }
        x += step * p;
        if (!add_if_independent(blocking)) {
            // Dependent on the working set: the projected direction is already
            // orthogonal to it up to rounding, so the climb is over.
            return {Ascent::Outcome::LocalMax, x};
        }
    }
    return {Ascent::Outcome::Stalled, x};
}

double max_violation(std::span<const HalfSpace> cons, const Vec& x)
{
    double worst = 0.0;
    for (const auto& h : cons) {
        worst = std::max(worst, h.axis.dot(x) - h.threshold);
    }
    return worst;
}

} // namespace

MaxResult heuristic_max(std::span<const HalfSpace> cons, const std::vector<Vec>& starts,
                        const QpSettings& settings, std::uint64_t seed)
{
    const int d = common_dim(cons);
    MaxResult best;
    best.best = -kInf;

    const MinNormResult anchor = min_norm_point(cons, settings);
    if (!anchor.feasible) {
        throw InvalidArgument("heuristic_max needs a non-empty polyhedron");
    }

    // Recession directions: v with (a_i, v) <= 0 for every row.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 64; ++trial) {
        Vec v(d);
        for (int k = 0; k < d; ++k) {
            v[k] = normal(rng);
        }
        bool recedes = true;
        for (const auto& h : cons) {
            if (h.axis.dot(v) > 0.0) {
                recedes = false;
                break;
            }
        }
        if (recedes) {
            best.unbounded = true;
            best.best = kInf;
            best.x_max = far_along(anchor.x_min, v);
            return best;
        }
    }

    const double feas_tol = std::max(1e-8, 100.0 * settings.tol);
    for (const auto& start : starts) {
        if (start.size() != d) {
            throw InvalidArgument("start vector has the wrong length");
        }
        MinNormResult proj = project_onto(cons, start, settings);
        if (!proj.feasible) {
            ++best.starts_discarded;
            continue;
        }
        const Ascent a = climb(cons, proj.x_min, settings);
        ++best.starts_used;
        if (a.outcome == Ascent::Outcome::Unbounded) {
            best.unbounded = true;
            best.best = kInf;
            best.x_max = a.x;
            return best;
        }
        if (max_violation(cons, a.x) > feas_tol) {
            ++best.starts_discarded;
            continue;
        }
        const double value = a.x.squaredNorm();
        if (value > best.best) {
            best.best = value;
            best.x_max = a.x;
        }
    }
    if (best.x_max.size() == 0) {
        best.best = anchor.m;
        best.x_max = anchor.x_min;
    }
    return best;
}

QpVerdict cover_qp(const Constellation& cst, const QpCoverConfig& cfg)
{
    QpVerdict v;
    if (is_degenerate(cst, cfg.eps)) {
        v.degenerate = true;
        v.covered = true;
        return v;
    }
    const auto cons = halfspaces(cst);
    const MinNormResult low = min_norm_point(cons, cfg.settings);
    if (!low.feasible) {
        v.infeasible = true;
        v.covered = true;
        return v;
    }
    v.m = low.m;
    v.x_min = low.x_min;
    if (!(low.m < 1.0)) {
        v.covered = true;
        return v;
    }
    std::vector<Vec> starts = default_starts(cst.dim(), cfg.start_count, cfg.seed);
    starts.insert(starts.end(), cfg.extra_starts.begin(), cfg.extra_starts.end());
    const MaxResult high = heuristic_max(cons, starts, cfg.settings, cfg.seed);
    v.m_hat = high.best;
    v.x_max = high.x_max;
    v.covered = !(high.best > 1.0);
    return v;
}

namespace {

// Rows that hold with equality on the whole polyhedron: no feasible point
// keeps them slack by delta.
std::vector<bool> implicit_equalities(const std::vector<HalfSpace>& cons,
                                      const QpSettings& settings)
{
    std::vector<bool> eq(cons.size(), false);
    std::vector<HalfSpace> probe = cons;
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const double delta = 1e-7 * std::max(1.0, std::abs(cons[i].threshold));
        probe[i].threshold = cons[i].threshold - delta;
        eq[i] = !min_norm_point(probe, settings).feasible;
        probe[i].threshold = cons[i].threshold;
    }
    return eq;
}

// Is there x with |x|^2 > 1 satisfying every row? Rows have unit axes.
bool exceeds_unit_ball(const std::vector<HalfSpace>& cons, const CoverConfig& cfg,
                       const QpSettings& settings)
{
    const MinNormResult low = min_norm_point(cons, settings);
    if (!low.feasible) {
        return false;
    }
    const int d = static_cast<int>(cons.front().axis.size());

    const std::vector<bool> eq = implicit_equalities(cons, settings);
    if (std::find(eq.begin(), eq.end(), true) != eq.end()) {
        // Restrict to the affine hull x = x0 + N z with x0 orthogonal to N,
        // so |x|^2 = |x0|^2 + |z|^2.
        std::vector<int> rows;
        for (std::size_t i = 0; i < cons.size(); ++i) {
            if (eq[i]) {
                rows.push_back(static_cast<int>(i));
            }
        }
        Eigen::MatrixXd e(static_cast<Eigen::Index>(rows.size()), d);
        Vec f(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t k = 0; k < rows.size(); ++k) {
            e.row(static_cast<Eigen::Index>(k)) = cons[rows[k]].axis.transpose();
            f[static_cast<Eigen::Index>(k)] = cons[rows[k]].threshold;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-9);
        const int rank = static_cast<int>(svd.rank());
        const Vec x0 = svd.solve(f);
        const int free_dim = d - rank;
        const double rest = 1.0 - x0.squaredNorm();
        if (free_dim == 0) {
            return rest < 0.0;
        }
        if (rest <= 0.0) {
            return true;
        }
        const Eigen::MatrixXd n = svd.matrixV().rightCols(free_dim);
        const double scale = std::sqrt(rest);
        std::vector<HalfSpace> reduced;
        for (std::size_t i = 0; i < cons.size(); ++i) {
            if (eq[i]) {
                continue;
            }
            const Vec a = n.transpose() * cons[i].axis;
            const double norm = a.norm();
            if (norm <= 1e-9) {
                continue; // constant on the hull and satisfied there
            }
            reduced.push_back({a / norm, (cons[i].threshold - cons[i].axis.dot(x0)) / (scale * norm)});
        }
        if (reduced.empty()) {
            return true;
        }
        return exceeds_unit_ball(reduced, cfg, settings);
    }

    if (d == 1) {
        double lo = -kInf;
        double hi = kInf;
        for (const auto& h : cons) {
            if (h.axis[0] > 0.0) {
                hi = std::min(hi, h.threshold);
            } else {
                lo = std::max(lo, -h.threshold);
            }
        }
        return std::max(std::abs(lo), std::abs(hi)) > 1.0;
    }
    if (low.m >= 1.0) {
        return true;
    }

    // A row with threshold >= 1 holds on the whole unit sphere (up to the single
    // point t_i when the threshold is exactly 1), so it excludes nothing.
    std::vector<Cap> caps;
    for (const auto& h : cons) {
        if (h.threshold < 1.0) {
            caps.emplace_back(h.axis, h.threshold);
        }
    }
    if (caps.empty()) {
        return true;
    }
    return !cover(Constellation(d, std::move(caps)), cfg).covered;
}

} // namespace

bool qp_to_cover(const QpInstance& q, const CoverConfig& cfg, const QpSettings& settings)
{
    const auto cons = normalize_instance(q);
    for (std::size_t i = 0; i < cons.size(); ++i) {
        for (std::size_t j = i + 1; j < cons.size(); ++j) {
            if ((cons[i].axis + cons[j].axis).norm() <= cfg.tol.eps &&
                std::abs(cons[i].threshold + cons[j].threshold) <= cfg.tol.eps) {
                throw DegenerateInstance("constraints " + std::to_string(i + 1) + " and " +
                                         std::to_string(j + 1) +
                                         " confine the polytope to a hyperplane");
            }
        }
    }
    return exceeds_unit_ball(cons, cfg, settings);
}

Graph::Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0)
{
    if (n < 1) {
        throw InvalidArgument("graph needs at least one vertex");
    }
}

void Graph::add_edge(int u, int v)
{
    if (u < 0 || v < 0 || u >= n_ || v >= n_) {
        throw InvalidArgument("edge endpoint out of range");
    }
    if (u == v) {
        throw InvalidArgument("self-loops are not allowed");
    }
    adj_[static_cast<std::size_t>(u * n_ + v)] = 1;
    adj_[static_cast<std::size_t>(v * n_ + u)] = 1;
}

bool Graph::adjacent(int u, int v) const
{
    return adj_[static_cast<std::size_t>(u * n_ + v)] != 0;
}

std::size_t Graph::edge_count() const
{
    return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), 1)) / 2;
}

QpInstance clique_instance(const Graph& g, int k)
{
    const int n = g.size();
    if (k < 1 || k > n) {
        throw InvalidArgument("clique size must satisfy 1 <= k <= n");
    }
    if (n < 2) {
        throw InvalidArgument("clique reduction needs at least two vertices");
    }
    std::vector<Vec> rows;
    std::vector<double> rhs;
    for (int i = 0; i < n; ++i) {
        Vec up = Vec::Zero(n);
        up[i] = 1.0;
        rows.push_back(up);
        rhs.push_back(1.0);
        rows.push_back(-up);
        rhs.push_back(1.0);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!g.adjacent(i, j)) {
                Vec r = Vec::Zero(n);
                r[i] = 1.0;
                r[j] = 1.0;
                rows.push_back(std::move(r));
                rhs.push_back(0.0);
            }
        }
    }
    rows.push_back(Vec::Constant(n, -1.0));
    rhs.push_back(static_cast<double>(n - 2 * k));

    QpInstance q;
    q.A.resize(static_cast<Eigen::Index>(rows.size()), n);
    q.b.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        q.A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
        q.b[static_cast<Eigen::Index>(r)] = rhs[r];
    }
    q.c = static_cast<double>(n) - 2.0 / static_cast<double>(n);
    return q;
}

bool brute_clique(const Graph& g, int k)
{
    const int n = g.size();
    if (n > 20) {
        throw InvalidArgument("brute_clique is limited to 20 vertices");
    }
    if (k <= 0) {
        return true;
    }
    if (k > n) {
        return false;
    }
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) {
            continue;
        }
        bool clique = true;
        for (int u = 0; u < n && clique; ++u) {
            if (!(mask & (1u << u))) {
                continue;
            }
            for (int v = u + 1; v < n; ++v) {
                if ((mask & (1u << v)) && !g.adjacent(u, v)) {
                    clique = false;
                    break;
                }
            }
        }
        if (clique) {
            return true;
        }
    }
    return false;
}

} // namespace sphcover
