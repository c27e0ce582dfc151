#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace sphcover {

using Vec = Eigen::VectorXd;

inline constexpr double kDefaultEps = 1e-9;

/// Numerical knobs shared by the recursive solver and its helpers.
struct Tolerances {
    double eps = kDefaultEps;      // boundary comparisons
    double delta0 = 0.01;          // first rotation angle tried by rotate_clear
    double shrink = 0.9;           // rotation angle shrink factor
    int max_rotation_attempts = 200;
};

/// A closed hyperspherical cap {x : |x| = 1, (x, axis) >= threshold}.
class Cap {
public:
    /// Throws InvalidArgument unless |axis| = 1 (within 1e-9), dim >= 2 and -1 < threshold < 1.
    Cap(Vec axis, double threshold);

    const Vec& axis() const noexcept { return axis_; }
    double threshold() const noexcept { return threshold_; }
    int dim() const noexcept { return static_cast<int>(axis_.size()); }

    /// (x, axis) - threshold; non-negative exactly when x is in the cap.
    double slack(const Vec& x) const { return x.dot(axis_) - threshold_; }

private:
    Vec axis_;
    double threshold_;
};

/// The instance: a dimension and a non-empty ordered list of caps.
class Constellation {
public:
    Constellation(int dim, std::vector<Cap> caps);

    /// Same axes with one threshold for every cap.
    static Constellation uniform(int dim, const std::vector<Vec>& axes, double threshold);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return caps_.size(); }
    const std::vector<Cap>& caps() const noexcept { return caps_; }
    const Cap& operator[](std::size_t i) const { return caps_[i]; }

    /// Copy with every threshold lowered by alpha (the enlarged caps).
    Constellation enlarged(double alpha) const;

    /// max_i ((x, t_i) - theta_i); negative exactly when x is uncovered.
    double margin(const Vec& x) const;

private:
    int dim_;
    std::vector<Cap> caps_;
};

/// Image of a cap under inversion about (1, 0, ..., 0): a (d-1)-sphere in the
/// hyperplane x1 = 1/2 together with its interior (internal) or exterior
/// (external). The constant first coordinate is dropped from `center`.
class PlaneRegion {
public:
    PlaneRegion(Vec center, double radius, bool external);

    const Vec& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    bool external() const noexcept { return external_; }
    int dim() const noexcept { return static_cast<int>(center_.size()); }

    /// Closed membership test in hyperplane coordinates, with eps slack on the boundary.
    bool contains(const Vec& y, double eps = kDefaultEps) const;

private:
    Vec center_;
    double radius_;
    bool external_;
};

/// Rotation by `angle` radians in the plane spanned by e1 and the unit vector
/// `dir`, which must be orthogonal to e1.
struct PlaneRotation {
    double angle = 0.0;
    Vec dir;

    Vec apply(const Vec& x) const;
};

/// (1, 0, ..., 0) in R^dim.
Vec inversion_center(int dim);

/// Inversion x -> center + radius^2 (x - center) / |x - center|^2.
/// Throws DegenerateInput when x is within eps of center.
Vec invert(const Vec& center, double radius, const Vec& x, double eps = kDefaultEps);

/// Region image of a cap under inversion about (1, 0, ..., 0) with unit radius.
/// Throws CenterOnBoundary when |theta - t_1| <= eps.
PlaneRegion cap_image(const Cap& cap, double eps = kDefaultEps);

/// Rotates x by `angle` in the x1-x2 plane.
Vec rotate(const Vec& x, double angle);
Vec rotate(const Vec& x, const PlaneRotation& r);

/// Inverses of rotate().
Vec unrotate(const Vec& x, double angle);
Vec unrotate(const Vec& x, const PlaneRotation& r);

/// Ensures the inversion center is off every cap boundary. Tries angles
/// delta0, delta0*shrink, ... applied to the original axes, in the x1-x2 plane
/// first and then in two fixed oblique planes. Returns the first clear
/// constellation with the rotation used, or the input unchanged and nullopt.
/// Throws RotationExhausted after tol.max_rotation_attempts failures in every plane.
std::pair<Constellation, std::optional<PlaneRotation>> rotate_clear(const Constellation& cst,
                                                                    const Tolerances& tol = {});

/// First antipodal pair (i < j): |t_i + t_j| <= eps and |theta_i + theta_j| <= eps.
std::optional<std::pair<std::size_t, std::size_t>> is_degenerate(const Constellation& cst,
                                                                 double eps = kDefaultEps);

} // namespace sphcover
