#include "dualflow/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dualflow/error.hpp"
#include "dualflow/resample.hpp"

namespace dualflow {

namespace {

constexpr double kPi = std::numbers::pi;

inline Vec3 flip(const Vec3& a) { return Vec3(-a[0], a[1], a[2]); }

PointwiseDual build_dual(const std::vector<PointGeometry>& frame, SpaceTag target) {
    const int K = static_cast<int>(frame.size()) - 1;
    PointwiseDual d;
    d.space = target;
    d.theta.resize(K + 1);
    d.u.resize(K + 1);
    d.points.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        const Vec3 y = flip(frame[k].nu);
        d.points[k] = y;
        d.u[k] = target == SpaceTag::DeSitter ? std::asinh(y[0]) : std::acosh(std::max(1.0, y[0]));
        if (k == 0)
            d.theta[k] = 0.0;
        else if (k == K)
            d.theta[k] = kPi;
        else
            d.theta[k] = std::atan2(y[2], y[1]);
    }
    for (int k = 1; k <= K; ++k)
        if (!(d.theta[k] > d.theta[k - 1])) throw GeometryError(GeometryFailure::NotGraphical, k);
    return d;
}

}  // namespace

PointwiseDual gauss_map_to_desitter(const MeridianSurface& m) {
    if (m.space != SpaceTag::Hyperbolic) throw DomainError("gauss_map_to_desitter expects a surface in H");
    for (int k = 0; k <= m.K; ++k)
        if (!(m.u[k] > 0.0)) throw GeometryError(GeometryFailure::NotInterior, k);
    return build_dual(compute_frame(m), SpaceTag::DeSitter);
}

PointwiseDual gauss_map_to_hyperbolic(const MeridianSurface& m) {
    if (m.space != SpaceTag::DeSitter) throw DomainError("gauss_map_to_hyperbolic expects a surface in N");
    for (int k = 0; k <= m.K; ++k)
        if (!(m.u[k] < 0.0)) throw GeometryError(GeometryFailure::NotInterior, k);
    return build_dual(compute_frame(m), SpaceTag::Hyperbolic);
}

MeridianSurface resample(const PointwiseDual& d, int n, int K, double* resampling_error) {
    const PolarInterpolant interp(d.theta, d.u);
    std::vector<double> u(K + 1);
    double err = 0.0;
    for (int k = 0; k <= K; ++k) {
        const double th = k * kPi / K;
        u[k] = interp(th);
        err = std::max(err, interp.error_estimate(th));
    }
    if (resampling_error) *resampling_error = err;
    return MeridianSurface(d.space, n, K, std::move(u));
}

MeridianSurface dualize(const MeridianSurface& m, double* resampling_error) {
    return resample(gauss_map_to_desitter(m), m.n, m.K, resampling_error);
}

MeridianSurface dualize_inverse(const MeridianSurface& m, double* resampling_error) {
    return resample(gauss_map_to_hyperbolic(m), m.n, m.K, resampling_error);
}

double meridian_distance(const MeridianSurface& a, const MeridianSurface& b) {
    if (a.K != b.K) throw DomainError("meridian_distance needs matching grids");
    double d = 0.0;
    for (int k = 0; k <= a.K; ++k) d = std::max(d, std::abs(a.u[k] - b.u[k]));
    return d;
}

DualityReport duality_report(const MeridianSurface& m_h, const MeridianSurface& m_n) {
    if (m_h.space != SpaceTag::Hyperbolic || m_n.space != SpaceTag::DeSitter)
        throw DomainError("duality_report expects (surface in H, surface in N)");
    if (m_h.K != m_n.K || m_h.n != m_n.n) throw DomainError("duality_report needs matched grids");
    const int K = m_h.K;

    const auto gh = compute_frame(m_h);
    const PointwiseDual pd = build_dual(gh, SpaceTag::DeSitter);

    std::vector<double> grid(K + 1);
    for (int k = 0; k <= K; ++k) grid[k] = m_n.theta(k);
    const PolarInterpolant iu(grid, m_n.u);

    // m_n sampled at the dual latitudes of m_h, i.e. in the parametrization of m_h
    std::vector<Vec3> paired(K + 1);
    DualityReport r;
    r.K = K;
    for (int k = 0; k <= K; ++k) {
        const double th = pd.theta[k];
        paired[k] = embed_reduced(SpaceTag::DeSitter, th, iu(th));
        if (k == 0 || k == K) paired[k][2] = 0.0;
        r.resampling_error = std::max(r.resampling_error, iu.error_estimate(th));
    }
    std::vector<PointGeometry> gn;
    compute_curve_geometry(SpaceTag::DeSitter, m_n.n, paired, nullptr, gn);

    for (int k = 0; k <= K; ++k) {
        const PointGeometry& p = gh[k];
        const PointGeometry& q = gn[k];
        // back to the un-flipped frame where x~ is the exterior normal of m_h
        const Vec3 dual_pt = flip(q.x);
        const Vec3 dual_tan = flip(q.x_theta);
        r.orthogonality_residual = std::max(r.orthogonality_residual, std::abs(lorentz_dot(p.x, dual_pt)));

        const double ident_mer = lorentz_dot(dual_tan, p.x_theta);
        r.h_identity_residual_mer =
            std::max({r.h_identity_residual_mer, std::abs(p.h_mer - ident_mer), std::abs(q.h_mer - ident_mer)});
        const double ident_rot = dual_pt[2] * p.x[2];
        r.h_identity_residual_rot =
            std::max({r.h_identity_residual_rot, std::abs(p.h_rot - ident_rot), std::abs(q.h_rot - ident_rot)});

        r.kappa_product_residual = std::max({r.kappa_product_residual, std::abs(p.kappa_mer * q.kappa_mer - 1.0),
                                             std::abs(p.kappa_rot * q.kappa_rot - 1.0)});
    }
    r.h_identity_residual = std::max(r.h_identity_residual_mer, r.h_identity_residual_rot);
    return r;
}

}  // namespace dualflow
