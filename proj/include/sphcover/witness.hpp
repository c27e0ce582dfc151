#pragma once

#include "sphcover/geometry.hpp"
#include "sphcover/recursive_cover.hpp"

#include <optional>

namespace sphcover {

struct WitnessReport {
    Vec point;               // unit vector in R^d
    double margin = 0.0;     // max_i ((point, t_i) - theta_i) against the original caps
    double alpha_used = 0.0; // enlargement that produced the point
    int attempts = 0;        // enlarged problems solved
};

struct WitnessConfig {
    double alpha0 = 0.01;
    double shrink = 0.9;
    int max_attempts = 200;
};

/// Replays a failing trace from its base payload up to the top level and
/// returns the resulting point on the unit sphere. Throws MalformedTrace when
/// the level dimensions are not contiguous.
Vec lift_witness(const WitnessTrace& trace);

/// Certified uncovered point, or nullopt when the caps cover the sphere.
///
/// The caps are widened by alpha = alpha0, alpha0*shrink, ... until the
/// widened problem is still uncovered; the boundary point lifted from that
/// problem is strictly outside every original cap. Alphas that would push a
/// threshold to -1 or below are skipped. Throws AlphaExhausted when every
/// attempt stays covered.
std::optional<WitnessReport> find_uncovered(const Constellation& cst,
                                            const WitnessConfig& wcfg = {},
                                            const CoverConfig& cfg = {});

struct WitnessCheck {
    bool valid = false;
    double margin = 0.0;
};

/// valid iff |point| = 1 (within 1e-6) and the point is strictly outside every cap.
WitnessCheck verify_witness(const Constellation& cst, const Vec& point);

} // namespace sphcover
