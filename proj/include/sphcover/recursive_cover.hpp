#pragma once

#include "sphcover/geometry.hpp"

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace sphcover {

struct CoverConfig {
    Tolerances tol;
    /// Worker threads for the top-level sphere loop; results do not depend on it.
    unsigned threads = 1;
};

struct CoverStats {
    std::size_t recursive_calls = 0;
    int max_depth = 0;
    std::size_t rotations = 0;
    /// Largest number of subcaps handed to a single recursive call.
    std::size_t max_fanout = 0;

    void merge(const CoverStats& other);
};

/// How the innermost failing call ended.
enum class BaseKind {
    LineCoordinate,  // d = 2 sweep found an uncovered line coordinate
    Antipode,        // single cap: the antipode of its axis
    InversionCenter, // every region internal: the inversion center itself
    WholeSphere,     // no other region meets the sphere: a fixed point on it
};

struct TraceBase {
    BaseKind kind = BaseKind::Antipode;
    int dim = 0;                        // dimension of the sphere the payload lives on
    double line_coord = 0.0;            // LineCoordinate only
    Vec point;                          // Antipode only
    std::optional<PlaneRotation> rotation; // rotation applied at this level before the exit
};

/// One recursion level above the base: sphere `sphere` (center, radius in the
/// hyperplane) was left uncovered by its subproblem.
struct TraceLevel {
    int dim = 0;
    std::size_t sphere = 0;
    Vec center;
    double radius = 0.0;
    std::optional<PlaneRotation> rotation;
};

/// Replayable record of where coverage failed; levels ascend from base.dim + 1.
struct WitnessTrace {
    TraceBase base;
    std::vector<TraceLevel> levels;

    int top_dim() const { return levels.empty() ? base.dim : levels.back().dim; }
};

struct Verdict {
    bool covered = false;
    std::optional<WitnessTrace> trace;
    CoverStats stats;
};

struct CoveredByOther {};
struct Disjoint {};
/// Same sphere and same orientation; the second region is redundant.
struct Duplicate {};

using SubcapResult = std::variant<CoveredByOther, Disjoint, Duplicate, Cap>;

/// How region j meets the boundary sphere of region i. A Cap result lives on
/// the unit sphere of the (d-1)-dimensional hyperplane, centered on S_i.
SubcapResult subcap(const PlaneRegion& i, const PlaneRegion& j, double eps = kDefaultEps);

/// Decides whether the caps cover the unit sphere. With want_witness a
/// WitnessTrace is attached to every negative verdict.
Verdict cover(const Constellation& cst, const CoverConfig& cfg = {}, bool want_witness = false);

} // namespace sphcover
