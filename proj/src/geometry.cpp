#include "sphcover/geometry.hpp"

#include "sphcover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sphcover {

Cap::Cap(Vec axis, double threshold) : axis_(std::move(axis)), threshold_(threshold)
{
    if (axis_.size() < 2) {
        throw InvalidArgument("cap dimension must be at least 2");
    }
    if (!axis_.allFinite() || std::abs(axis_.norm() - 1.0) > 1e-9) {
        throw InvalidArgument("cap axis must be a unit vector");
    }
    if (!std::isfinite(threshold_) || threshold_ <= -1.0 || threshold_ >= 1.0) {
        throw InvalidArgument("cap threshold must lie strictly inside (-1, 1), got " +
                              std::to_string(threshold_));
    }
}

Constellation::Constellation(int dim, std::vector<Cap> caps) : dim_(dim), caps_(std::move(caps))
{
    if (dim_ < 2) {
        throw InvalidArgument("constellation dimension must be at least 2");
    }
    if (caps_.empty()) {
        throw InvalidArgument("constellation needs at least one cap");
    }
    for (const auto& cap : caps_) {
        if (cap.dim() != dim_) {
            throw InvalidArgument("cap dimension does not match constellation dimension");
        }
    }
}

Constellation Constellation::uniform(int dim, const std::vector<Vec>& axes, double threshold)
{
    std::vector<Cap> caps;
    caps.reserve(axes.size());
    for (const auto& a : axes) {
        caps.emplace_back(a, threshold);
    }
    return Constellation(dim, std::move(caps));
}

Constellation Constellation::enlarged(double alpha) const
{
    std::vector<Cap> caps;
    caps.reserve(caps_.size());
    for (const auto& cap : caps_) {
        caps.emplace_back(cap.axis(), cap.threshold() - alpha);
    }
    return Constellation(dim_, std::move(caps));
}

double Constellation::margin(const Vec& x) const
{
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& cap : caps_) {
        best = std::max(best, cap.slack(x));
    }
    return best;
}

PlaneRegion::PlaneRegion(Vec center, double radius, bool external)
    : center_(std::move(center)), radius_(radius), external_(external)
{
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
        throw InvalidArgument("plane region radius must be positive and finite");
    }
}

bool PlaneRegion::contains(const Vec& y, double eps) const
{
    const double dist = (y - center_).norm();
    return external_ ? dist >= radius_ - eps : dist <= radius_ + eps;
}

Vec inversion_center(int dim)
{
    Vec c = Vec::Zero(dim);
    c[0] = 1.0;
    return c;
}

Vec invert(const Vec& center, double radius, const Vec& x, double eps)
{
    const Vec diff = x - center;
    const double sq = diff.squaredNorm();
    if (std::sqrt(sq) <= eps) {
        throw DegenerateInput("cannot invert the inversion center");
    }
    return center + (radius * radius / sq) * diff;
}

PlaneRegion cap_image(const Cap& cap, double eps)
{
    const Vec& t = cap.axis();
    const double theta = cap.threshold();
    const double gap = theta - t[0];
    if (std::abs(gap) <= eps) {
        throw CenterOnBoundary("inversion center lies on a cap boundary");
    }
    const int m = cap.dim() - 1;
    Vec center = t.tail(m) / (2.0 * gap);
    const double radius = std::abs(std::sqrt(1.0 - theta * theta) / (2.0 * gap));
    return PlaneRegion(std::move(center), radius, t[0] > theta);
}

Vec PlaneRotation::apply(const Vec& x) const
{
    // Only the components along e1 and dir change.
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double p = x[0];
    const double q = dir.dot(x);
    Vec y = x + ((c - 1.0) * q + s * p) * dir;
    y[0] = c * p - s * q;
    return y;
}

Vec rotate(const Vec& x, const PlaneRotation& r)
{
    return r.apply(x);
}

Vec unrotate(const Vec& x, const PlaneRotation& r)
{
    return PlaneRotation{-r.angle, r.dir}.apply(x);
}

Vec rotate(const Vec& x, double angle)
{
    Vec e2 = Vec::Zero(x.size());
    e2[1] = 1.0;
    return rotate(x, PlaneRotation{angle, e2});
}

Vec unrotate(const Vec& x, double angle)
{
    return rotate(x, -angle);
}

namespace {

bool center_clear(const Constellation& cst, double eps)
{
    for (const auto& cap : cst.caps()) {
        if (std::abs(cap.axis()[0] - cap.threshold()) <= eps) {
            return false;
        }
    }
    return true;
}

// e2 first, then two fixed directions with no zero components. A cap with
// threshold 0 whose axis is orthogonal to both e1 and the plane direction
// keeps the center on its boundary for every angle, hence the fallbacks.
std::vector<Vec> rotation_planes(int d)
{
    std::vector<Vec> planes;
    Vec e2 = Vec::Zero(d);
    e2[1] = 1.0;
    planes.push_back(e2);
    if (d > 2) {
        Vec g = Vec::Zero(d);
        Vec h = Vec::Zero(d);
        for (int j = 1; j < d; ++j) {
            g[j] = 1.0 / std::sqrt(static_cast<double>(j));
            h[j] = std::cos(2.4 * j) + 0.05;
        }
        planes.push_back(g / g.norm());
        planes.push_back(h / h.norm());
    }
    return planes;
}

} // namespace

std::pair<Constellation, std::optional<PlaneRotation>> rotate_clear(const Constellation& cst,
                                                                    const Tolerances& tol)
{
    if (!(tol.delta0 > 0.0) || !(tol.shrink > 0.0 && tol.shrink < 1.0)) {
        throw InvalidArgument("rotation requires delta0 > 0 and shrink in (0, 1)");
    }
    if (center_clear(cst, tol.eps)) {
        return {cst, std::nullopt};
    }
    for (const Vec& dir : rotation_planes(cst.dim())) {
        double delta = tol.delta0;
        for (int attempt = 0; attempt < tol.max_rotation_attempts; ++attempt) {
            const PlaneRotation r{delta, dir};
            std::vector<Cap> caps;
            caps.reserve(cst.size());
            for (const auto& cap : cst.caps()) {
                Vec t = r.apply(cap.axis());
                t /= t.norm();
                caps.emplace_back(std::move(t), cap.threshold());
            }
            Constellation rotated(cst.dim(), std::move(caps));
            if (center_clear(rotated, tol.eps)) {
                return {std::move(rotated), r};
            }
            delta *= tol.shrink;
        }
    }
    throw RotationExhausted("no clearing rotation found after " +
                            std::to_string(tol.max_rotation_attempts) + " attempts per plane");
}

std::optional<std::pair<std::size_t, std::size_t>> is_degenerate(const Constellation& cst,
                                                                 double eps)
{
    const auto& caps = cst.caps();
    for (std::size_t i = 0; i < caps.size(); ++i) {
        for (std::size_t j = i + 1; j < caps.size(); ++j) {
            if ((caps[i].axis() + caps[j].axis()).norm() <= eps &&
                std::abs(caps[i].threshold() + caps[j].threshold()) <= eps) {
                return std::make_pair(i, j);
            }
        }
    }
    return std::nullopt;
}

} // namespace sphcover
