#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dualflow/curvature.hpp"
#include "dualflow/error.hpp"
#include "dualflow/geometry.hpp"

namespace dualflow {

/// Inverse flow speed Phi(r) = -1/r and its derivatives.
struct SpeedFunction {
    static double phi(double r) { return -1.0 / r; }
    static double phi_dot(double r) { return 1.0 / (r * r); }
    static double phi_ddot(double r) { return -2.0 / (r * r * r); }
};

/// Inverse flow in N: du/dt = v / F.
void rhs_inverse(std::span<const PointGeometry> geometry, std::span<double> out);
std::vector<double> rhs_inverse(const MeridianSurface& surface, const CurvatureFunction& f);

/// Direct flow in H with speed F~ along the exterior normal: du/dt = -F~ / v_H,
/// where v_H = <nu, radial> = (1 + u_theta^2 / sinh^2 u)^{-1/2}.
void rhs_direct(std::span<const PointGeometry> geometry, std::span<double> out);
std::vector<double> rhs_direct(const MeridianSurface& surface, const CurvatureFunction& f_tilde);

/// Closed-form umbilic solution cosh u(t) = cosh(u0) e^{-t}, keeping the sign of u0.
/// Throws DomainError for t < 0 or t >= log cosh u0.
double spherical_oracle(double u0, double t);
double spherical_stop_time(double u0);

enum class FlowKind { InverseDeSitter, DirectHyperbolic };

struct FlowParams {
    double t_max = 10.0;
    double eps_stop = 1e-3;
    double c_cfl = 0.2;
    double dt_max = 1e-3;
    double dt_fixed = 0.0;  // > 0: use min(dt_fixed, adaptive)
    std::int64_t record_interval = 1;
    int max_halvings = 20;
    double dt_min = 1e-12;
};

/// c_cfl h^2 min F^2 / max(v~^2 sum F_i) in N; in H the F^2 factor is replaced
/// by sinh^2 u. Clamped to [dt_min, dt_max].
double adaptive_dt(FlowKind kind, std::span<const PointGeometry> geometry, int K, const FlowParams& params);

/// Extrema of the monitored quantities over every accepted step, including t = 0.
struct FlowMonitor {
    DiagnosticsRow initial;
    double max_pinch_ratio = 1.0;
    double max_w_pinch = -1e300;
    double max_w_F_chi = -1e300;
    double max_v_tilde = 0.0;
    double max_chi = 0.0;
    double max_F = 0.0;
    double max_osc_u = 0.0;
    double max_min_u = -1e300;  // largest min u seen (must stay < 0 in N)
    std::int64_t nonmonotone_steps = 0;  // steps where du/dt had the wrong sign somewhere
    double last_pinch_ratio = 1.0;

    void observe(const DiagnosticsRow& row);
};

struct FlowState {
    FlowKind kind = FlowKind::InverseDeSitter;
    double t = 0.0;
    double dt = 0.0;
    std::int64_t steps = 0;
    std::int64_t rejected = 0;
    MeridianSurface surface;
    std::vector<PointGeometry> geometry;  // geometry of `surface`
    std::vector<DiagnosticsRow> history;
    FlowMonitor monitor;
};

/// Raised when dt has been halved below dt_min or more than max_halvings times.
class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, GeometryFailure cause, int index)
        : std::runtime_error(what), cause_(cause), index_(index) {}
    GeometryFailure cause() const noexcept { return cause_; }
    int index() const noexcept { return index_; }

private:
    GeometryFailure cause_;
    int index_;
};

/// Builds a state at t = 0. `f` is the curvature function of the surface's
/// own space (F for N, F~ for H). Throws GeometryError on invalid data.
FlowState make_state(FlowKind kind, MeridianSurface surface, const CurvatureFunction& f);

/// One classical RK4 step of size `dt` with geometry recomputed per stage.
/// On geometry failure dt is halved and the step retried. Updates t, dt,
/// steps, surface and geometry; throws StepFailure leaving `state` untouched.
void step(FlowState& state, const CurvatureFunction& f, double dt, const FlowParams& params);

bool reached_stop(const FlowState& state, const FlowParams& params);

enum class ExitReason { ReachedStop, ReachedTMax, StepFailure };
const char* to_string(ExitReason r);

struct FlowResult {
    FlowState state;
    ExitReason exit_reason = ExitReason::ReachedStop;
    std::string failure_message;
};

/// Called at t = 0, every record_interval steps and at termination.
using RecordCallback = std::function<void(const FlowState&)>;

/// Integrates until the stop rule (N: max u > -eps_stop, H: min u < eps_stop),
/// t_max, or a step failure.
FlowResult run_flow(FlowKind kind, MeridianSurface initial, const CurvatureFunction& f, const FlowParams& params,
                    const RecordCallback& on_record = {});

struct DualPairResult {
    FlowResult n_side;
    FlowResult h_side;
    std::vector<double> dual_distance;  // one per recorded row
    double max_dual_distance = 0.0;
};

using DualPairCallback = std::function<void(const FlowState& n_side, const FlowState& h_side, double dual_distance)>;

/// Runs the inverse F flow from `initial_n` in N and the direct F~ flow from
/// its dual in H with a common step size, recording
/// sup |dualize(M_H) - M_N| at each record.
DualPairResult run_dual_pair(const MeridianSurface& initial_n, const CurvatureFunction& f, const FlowParams& params,
                             const DualPairCallback& on_record = {});

}  // namespace dualflow
