#pragma once

#include <vector>

#include "dualflow/geometry.hpp"

namespace dualflow {

/// Pointwise image of a meridian under the Gauss map, before resampling.
struct PointwiseDual {
    SpaceTag space = SpaceTag::DeSitter;  // space of the image
    std::vector<double> theta;            // latitude of each image point (strictly increasing)
    std::vector<double> u;                // graph value of each image point
    std::vector<Vec3> points;             // image points in reduced coordinates
};

/// Gauss map of a strictly convex surface in H (Beltrami point interior,
/// checked as u > 0): exterior normal, then time flip, landing in N-.
PointwiseDual gauss_map_to_desitter(const MeridianSurface& m);

/// Inverse Gauss map of a spacelike strictly convex surface in N- (u < 0):
/// past-directed normal, then time flip, landing in H.
PointwiseDual gauss_map_to_hyperbolic(const MeridianSurface& m);

/// Re-expresses a pointwise dual as a graph on the uniform grid (cubic,
/// even continuation across the poles). `resampling_error` receives the
/// largest local stencil-disagreement estimate when non-null.
MeridianSurface resample(const PointwiseDual& d, int n, int K, double* resampling_error = nullptr);

/// H -> N- graph. Throws GeometryError on convexity loss, non-interior
/// Beltrami point or a non-monotone image latitude.
MeridianSurface dualize(const MeridianSurface& m, double* resampling_error = nullptr);

/// N- -> H graph; inverse of dualize.
MeridianSurface dualize_inverse(const MeridianSurface& m, double* resampling_error = nullptr);

struct DualityReport {
    int K = 0;
    double kappa_product_residual = 0.0;   // max |kappa_i kappa~_i - 1|
    double h_identity_residual = 0.0;      // max over both directions below
    double h_identity_residual_mer = 0.0;  // max |h - <x~_i, x_j>|, |h~ - <x~_i, x_j>| (meridian)
    double h_identity_residual_rot = 0.0;  // same, rotational
    double orthogonality_residual = 0.0;   // max |<x, x~>|
    double resampling_error = 0.0;
};

/// Evaluates the Gauss-map identities between a surface in H and a surface
/// in N on the same grid. Every point of `m_h` is paired with its dual
/// latitude; `m_n` fields are interpolated there. Mismatched pairs are
/// reported, not rejected.
DualityReport duality_report(const MeridianSurface& m_h, const MeridianSurface& m_n);

/// sup_k |a.u[k] - b.u[k]| on a shared grid.
double meridian_distance(const MeridianSurface& a, const MeridianSurface& b);

}  // namespace dualflow
