#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dualflow/curvature.hpp"
#include "dualflow/minkowski.hpp"

namespace dualflow {

/// de Sitter sectional curvature.
inline constexpr double kAmbientCurvatureDeSitter = 1.0;

/// Axially symmetric hypersurface of H^{n+1} or N^{n+1}, stored as graph
/// values on the uniform latitude grid theta_k = k pi / K, k = 0..K.
/// In H the value is the geodesic distance from the Beltrami point; in N it
/// is the time coordinate tau.
struct MeridianSurface {
    SpaceTag space = SpaceTag::DeSitter;
    int n = 2;
    int K = 0;
    std::vector<double> u;

    MeridianSurface() = default;
    MeridianSurface(SpaceTag space, int n, int K, std::vector<double> u);

    static MeridianSurface from_function(SpaceTag space, int n, int K, const std::function<double(double)>& f);

    double spacing() const;
    double theta(int k) const;
    double min_u() const;
    double max_u() const;
};

/// u = c + a cos(m theta).
MeridianSurface perturbed_surface(SpaceTag space, int n, int K, double c, double a, int m);
inline MeridianSurface slice_surface(int n, int K, double c) { return perturbed_surface(SpaceTag::DeSitter, n, K, c, 0.0, 0); }
inline MeridianSurface sphere_surface(int n, int K, double r) { return perturbed_surface(SpaceTag::Hyperbolic, n, K, r, 0.0, 0); }

/// Per-grid-point geometric state. Vectors are in the reduced meridian
/// coordinates (x^0, x^1, x^e); `lift` gives the full ambient vector.
/// Principal curvatures: kappa_mer (multiplicity 1) and kappa_rot
/// (multiplicity n-1); F_mer and F_rot are the matching partial derivatives.
struct PointGeometry {
    int n = 2;
    double theta = 0.0;
    double u = 0.0;
    Vec3 x = Vec3::Zero();
    Vec3 x_theta = Vec3::Zero();
    Vec3 nu = Vec3::Zero();
    double g_mer = 0.0, g_rot = 0.0;
    double h_mer = 0.0, h_rot = 0.0;
    double kappa_mer = 0.0, kappa_rot = 0.0;
    double kappa_min = 0.0, kappa_max = 0.0;
    double v = 1.0;
    double v_tilde = 1.0;
    double chi = 1.0;         // v_tilde * cosh u
    double chi_normal = 1.0;  // the same quantity read off the normal
    double F = 0.0, F_mer = 0.0, F_rot = 0.0;
    double sum_F_i = 0.0;         // F^{ij} g_ij
    double sum_F_i_kappa2 = 0.0;  // F^{ij} h_ik h^k_j
    double H_tilde = 0.0;         // sum 1/kappa_i

    double pinch_ratio() const { return kappa_max / kappa_min; }
    std::vector<double> sorted_kappa() const;
    std::vector<double> sorted_F_i() const;
};

LorentzVector lift(const Vec3& reduced, int n);

/// Ambient embedding of grid point k (exact chart formula).
LorentzVector embed(const MeridianSurface& surface, int k);
Vec3 embed_reduced(SpaceTag space, double theta, double u);

/// Geometry of a graph surface. u_theta, u_thetatheta come from fourth-order
/// central differences with even-reflection ghosts; embedding derivatives
/// follow from the chart by the chain rule. Throws GeometryError
/// (NotSpacelike / ConvexityLost / NonFinite) with the grid index.
/// With `f == nullptr` the F-dependent fields are left at zero.
void compute_geometry(const MeridianSurface& surface, const CurvatureFunction* f, std::vector<PointGeometry>& out);
std::vector<PointGeometry> compute_geometry(const MeridianSurface& surface, const CurvatureFunction& f);
std::vector<PointGeometry> compute_frame(const MeridianSurface& surface);

/// Geometry of a meridian curve given as K+1 points at a uniform parameter
/// xi_k = k pi / K (first and last on the axis). Derivatives by sixth-order
/// differences on the points themselves, with x^0, x^1 even and x^e odd
/// across the poles.
void compute_curve_geometry(SpaceTag space, int n, std::span<const Vec3> points, const CurvatureFunction* f,
                            std::vector<PointGeometry>& out);

/// du/dtheta by the same stencil compute_geometry uses.
std::vector<double> graph_derivative(const MeridianSurface& surface);

struct DiagnosticsRow {
    double t = 0.0;
    double dt = 0.0;
    double min_u = 0.0, max_u = 0.0, osc_u = 0.0;
    double kappa_min = 0.0, kappa_max = 0.0;
    double pinch_ratio = 1.0;
    double F_min = 0.0, F_max = 0.0;
    double v_tilde_max = 1.0;
    double chi_min = 1.0, chi_max = 1.0;
    double w_pinch = 0.0;  // sup(log F + log H~) - 2 n t
    double w_F_chi = 0.0;  // sup(log F + log chi)
};

/// Column names of DiagnosticsRow in CSV order.
const std::vector<std::string>& diagnostics_columns();
std::vector<double> diagnostics_values(const DiagnosticsRow& row);

DiagnosticsRow diagnostics(std::span<const PointGeometry> geometry, double t, int n);

/// "theta u kappa_min kappa_max v chi", one grid point per line, 17 digits.
void write_snapshot(std::ostream& os, std::span<const PointGeometry> geometry);

/// Reads the first two snapshot columns back into a surface. Throws DomainError
/// when the latitudes do not form the uniform grid.
MeridianSurface read_snapshot(std::istream& is, SpaceTag space, int n);

}  // namespace dualflow
