#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dualflow/curvature.hpp"
#include "dualflow/geometry.hpp"

namespace dualflow {

/// Meridian particles moved along the normal with velocity Phi nu = -nu / F.
/// Particle k starts at grid latitude k pi / K and keeps the label xi_k; the
/// geometry of a sample is that of the particle curve parametrized by xi.
struct LagrangianTrajectory {
    int n = 2;
    int K = 0;
    double dt = 0.0;
    int sample_stride = 1;
    std::vector<double> times;
    std::vector<std::vector<Vec3>> positions;
    double max_quadric_residual = 0.0;
    bool latitudes_monotone = true;

    std::vector<PointGeometry> geometry(std::size_t sample, const CurvatureFunction& f) const;
    std::vector<double> latitudes(std::size_t sample) const;
};

/// RK4 in ambient coordinates with curve geometry recomputed per stage;
/// positions re-projected onto the quadric after each step. A sample is kept
/// every `sample_stride` steps. Throws GeometryError / DomainError.
LagrangianTrajectory evolve_lagrangian(const MeridianSurface& initial, const CurvatureFunction& f, double t_end,
                                       double dt, int sample_stride = 1);

/// Sup-norm residuals of the evolution equations for chi, F and Phi = -1/F.
/// Time derivatives are centred differences over `window` samples on each
/// side; spatial derivatives are second-order differences along the particle
/// label. Samples within `margin` (>= window) of either end are skipped.
struct EvolutionResiduals {
    double chi = 0.0;
    double F = 0.0;
    double Phi = 0.0;
    double Phi_vs_F = 0.0;  // max |F^2 res_Phi - res_F|
    std::size_t samples_used = 0;
};

EvolutionResiduals evolution_residuals(const LagrangianTrajectory& traj, const CurvatureFunction& f, int window = 1,
                                       int margin = -1);

/// Pointwise chi residual field on samples [margin, size - margin), row-major.
std::vector<double> chi_residual_field(const LagrangianTrajectory& traj, const CurvatureFunction& f, int window,
                                       int margin);

double residual_chi(const LagrangianTrajectory& traj, const CurvatureFunction& f);
double residual_F(const LagrangianTrajectory& traj, const CurvatureFunction& f);

struct RefinementRow {
    int K = 0;
    double dt = 0.0;
    double residual_chi = 0.0;
    double residual_F = 0.0;
    double ratio_chi = 0.0;  // previous row / this row
    double ratio_F = 0.0;
};

struct RefinementReport {
    std::string label;
    std::vector<RefinementRow> rows;
};

struct ResidualStudy {
    int n = 2;
    double c = -1.0, a = 0.05;
    int m = 2;
    double t_end = 0.02;
    int sample_stride = 10;
    std::vector<std::pair<int, double>> resolutions = {{64, 4e-5}, {128, 2e-5}, {256, 1e-5}};
};

RefinementReport refinement_study(const ResidualStudy& study, const CurvatureFunction& f);

/// Time-order check on one trajectory: chi residual fields with windows
/// w, 2w, 4w; ratio = sup|R(4w) - R(2w)| / sup|R(2w) - R(w)|, about 4 for the
/// second-order centred difference.
struct TimeOrderResult {
    double coarse_difference = 0.0;
    double fine_difference = 0.0;
    double ratio = 0.0;
};

TimeOrderResult time_order_study(const LagrangianTrajectory& traj, const CurvatureFunction& f, int window = 1);

void write_refinement_report(std::ostream& os, const RefinementReport& report);

}  // namespace dualflow
