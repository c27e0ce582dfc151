#include "sphcover/witness.hpp"

#include "sphcover/errors.hpp"

#include <cmath>
#include <string>

namespace sphcover {

namespace {

// Point of the hyperplane x1 = 1/2 with the given trailing coordinates, mapped
// back onto the unit sphere.
Vec from_hyperplane(const Vec& tail)
{
    const int m = static_cast<int>(tail.size()) + 1;
    Vec v(m);
    v[0] = 0.5;
    v.tail(m - 1) = tail;
    return invert(inversion_center(m), 1.0, v);
}

} // namespace

Vec lift_witness(const WitnessTrace& trace)
{
    const TraceBase& base = trace.base;
    if (base.dim < 2) {
        throw MalformedTrace("trace base dimension must be at least 2");
    }

    Vec u;
    switch (base.kind) {
    case BaseKind::LineCoordinate:
        if (base.dim != 2) {
            throw MalformedTrace("line coordinate payload requires a 2-dimensional base");
        }
        u = from_hyperplane(Vec::Constant(1, base.line_coord));
        break;
    case BaseKind::Antipode:
        if (base.point.size() != base.dim) {
            throw MalformedTrace("antipode payload has the wrong length");
        }
        u = base.point;
        break;
    case BaseKind::InversionCenter:
        u = inversion_center(base.dim);
        break;
    case BaseKind::WholeSphere:
        u = Vec::Zero(base.dim);
        u[0] = 1.0;
        break;
    }
    if (base.rotation) {
        u = unrotate(u, *base.rotation);
    }

    int dim = base.dim;
    for (const auto& level : trace.levels) {
        if (level.dim != dim + 1) {
            throw MalformedTrace("trace levels jump from dimension " + std::to_string(dim) +
                                 " to " + std::to_string(level.dim));
        }
        if (level.center.size() != dim) {
            throw MalformedTrace("trace level center has the wrong length");
        }
        u = from_hyperplane(level.center + level.radius * u);
        if (level.rotation) {
            u = unrotate(u, *level.rotation);
        }
        dim = level.dim;
    }
    return u;
}

WitnessCheck verify_witness(const Constellation& cst, const Vec& point)
{
    if (point.size() != cst.dim()) {
        throw InvalidArgument("witness length does not match constellation dimension");
    }
    WitnessCheck check;
    check.margin = cst.margin(point);
    check.valid = std::abs(point.norm() - 1.0) <= 1e-6 && check.margin < 0.0;
    return check;
}

std::optional<WitnessReport> find_uncovered(const Constellation& cst, const WitnessConfig& wcfg,
                                            const CoverConfig& cfg)
{
    if (cover(cst, cfg, false).covered) {
        return std::nullopt;
    }

    double min_threshold = 1.0;
    for (const auto& cap : cst.caps()) {
        min_threshold = std::min(min_threshold, cap.threshold());
    }

    double alpha = wcfg.alpha0;
    int attempts = 0;
    for (int step = 0; step < wcfg.max_attempts; ++step, alpha *= wcfg.shrink) {
        if (min_threshold - alpha <= -1.0 + cfg.tol.eps) {
            continue;
        }
        ++attempts;
        const Constellation widened = cst.enlarged(alpha);
        const Verdict v = cover(widened, cfg, true);
        if (v.covered) {
            continue;
        }
        Vec point = lift_witness(*v.trace);
        point /= point.norm();
        const double margin = cst.margin(point);
        if (!(margin < 0.0)) {
            // Rounding ate the separation; a smaller alpha gives a fresh boundary point.
            continue;
        }
        return WitnessReport{std::move(point), margin, alpha, attempts};
    }
    throw AlphaExhausted("every enlarged problem remained covered after " +
                         std::to_string(wcfg.max_attempts) + " attempts");
}

} // namespace sphcover
