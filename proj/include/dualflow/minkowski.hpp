#pragma once

#include <Eigen/Dense>

namespace dualflow {

/// Ambient vector of R^{n+1,1}; index 0 is the time coordinate.
using LorentzVector = Eigen::VectorXd;

/// Axially symmetric data only ever occupies span{e0, e1, e2}; the hot
/// geometry loops work in these reduced coordinates (x^0, x^1, x^e).
using Vec3 = Eigen::Vector3d;

enum class SpaceTag { Hyperbolic, DeSitter };

enum class Orientation { Orthochronous, TimeFlip };

inline constexpr double kQuadricTolerance = 1e-10;

double lorentz_dot(const LorentzVector& a, const LorentzVector& b);

/// The defining quadratic form -(x^0)^2 + sum_a (x^a)^2.
double quadratic_form(const LorentzVector& x);

inline double lorentz_dot(const Vec3& a, const Vec3& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double quadratic_form(const Vec3& x) { return lorentz_dot(x, x); }

/// Vector Lorentz-orthogonal to both a and b (eta applied to the Euclidean cross product).
inline Vec3 lorentz_cross(const Vec3& a, const Vec3& b) {
    Vec3 c = a.cross(b);
    c[0] = -c[0];
    return c;
}

bool on_quadric(const LorentzVector& x, SpaceTag space, double tol = kQuadricTolerance);

/// Radial re-projection onto the quadric of `space` (divide by sqrt|q|).
LorentzVector project_to_quadric(const LorentzVector& x, SpaceTag space);
Vec3 project_to_quadric(const Vec3& x, SpaceTag space);

/// Element of O(n+1,1).
class LorentzTransform {
public:
    explicit LorentzTransform(Eigen::MatrixXd matrix);

    static LorentzTransform identity(int dim);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
    Orientation orientation() const noexcept;

    LorentzVector apply(const LorentzVector& x) const { return matrix_ * x; }
    LorentzVector operator()(const LorentzVector& x) const { return apply(x); }

    /// (*this) after `first`: x -> this(first(x)).
    LorentzTransform after(const LorentzTransform& first) const;

    /// max |L^T eta L - eta| entrywise.
    double metric_residual() const;

private:
    Eigen::MatrixXd matrix_;
};

/// Hyperbolic rotation by `theta` in the (x^0, x^1) plane.
LorentzTransform boost(int dim, double theta);

/// Rotation in the spatial (i, j) plane with cos/sin pair (c, s); i, j >= 1.
LorentzTransform givens(int dim, int i, int j, double c, double s);

/// Negates the time coordinate; maps N+ = {tau > 0} onto N-.
LorentzTransform time_flip(int dim);

/// Orthochronous L with L p = (1, 0, ..., 0): Givens rotations aligning the
/// spatial part with e1, followed by one boost. Throws DomainError if p is not on H.
LorentzTransform normalize_to_beltrami(const LorentzVector& p);

LorentzVector beltrami_point(int dim);

}  // namespace dualflow
