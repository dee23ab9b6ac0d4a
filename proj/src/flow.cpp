#include "dualflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dualflow/duality.hpp"

namespace dualflow {

void rhs_inverse(std::span<const PointGeometry> g, std::span<double> out) {
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = g[k].v / g[k].F;
}

std::vector<double> rhs_inverse(const MeridianSurface& s, const CurvatureFunction& f) {
    if (s.space != SpaceTag::DeSitter) throw DomainError("rhs_inverse expects a surface in N");
    const auto g = compute_geometry(s, f);
    std::vector<double> out(g.size());
    rhs_inverse(g, out);
    return out;
}

void rhs_direct(std::span<const PointGeometry> g, std::span<double> out) {
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = -g[k].F * g[k].v_tilde;
}

std::vector<double> rhs_direct(const MeridianSurface& s, const CurvatureFunction& f_tilde) {
    if (s.space != SpaceTag::Hyperbolic) throw DomainError("rhs_direct expects a surface in H");
    const auto g = compute_geometry(s, f_tilde);
    std::vector<double> out(g.size());
    rhs_direct(g, out);
    return out;
}

double spherical_stop_time(double u0) { return std::log(std::cosh(u0)); }

double spherical_oracle(double u0, double t) {
    if (u0 == 0.0) throw DomainError("spherical_oracle needs u0 != 0");
    if (t < 0.0) throw DomainError("spherical_oracle needs t >= 0");
    if (t >= spherical_stop_time(u0)) throw DomainError("time at or past the singular time log cosh u0");
    if (t == 0.0) return u0;
    const double r = std::acosh(std::cosh(u0) * std::exp(-t));
    return u0 < 0.0 ? -r : r;
}

double adaptive_dt(FlowKind kind, std::span<const PointGeometry> g, int K, const FlowParams& p) {
    const double h = std::numbers::pi / K;
    double num = std::numeric_limits<double>::infinity(), den = 0.0;
    for (const PointGeometry& pg : g) {
        const double a = kind == FlowKind::InverseDeSitter ? pg.F : std::sinh(pg.u);
        num = std::min(num, a * a);
        den = std::max(den, pg.v_tilde * pg.v_tilde * pg.sum_F_i);
    }
    double dt = p.c_cfl * h * h * num / den;
    if (!std::isfinite(dt)) dt = p.dt_min;
    return std::clamp(dt, p.dt_min, p.dt_max);
}

void FlowMonitor::observe(const DiagnosticsRow& r) {
    max_pinch_ratio = std::max(max_pinch_ratio, r.pinch_ratio);
    max_w_pinch = std::max(max_w_pinch, r.w_pinch);
    max_w_F_chi = std::max(max_w_F_chi, r.w_F_chi);
    max_v_tilde = std::max(max_v_tilde, r.v_tilde_max);
    max_chi = std::max(max_chi, r.chi_max);
    max_F = std::max(max_F, r.F_max);
    max_osc_u = std::max(max_osc_u, r.osc_u);
    max_min_u = std::max(max_min_u, r.min_u);
    last_pinch_ratio = r.pinch_ratio;
}

const char* to_string(ExitReason r) {
    switch (r) {
        case ExitReason::ReachedStop: return "reached_stop";
        case ExitReason::ReachedTMax: return "reached_t_max";
        case ExitReason::StepFailure: return "step_failure";
    }
    return "unknown";
}

namespace {

void eval_rhs(FlowKind kind, std::span<const PointGeometry> g, std::span<double> out) {
    if (kind == FlowKind::InverseDeSitter)
        rhs_inverse(g, out);
    else
        rhs_direct(g, out);
}

bool wrong_sign(FlowKind kind, std::span<const double> du) {
    for (double x : du)
        if (kind == FlowKind::InverseDeSitter ? !(x > 0.0) : !(x < 0.0)) return true;
    return false;
}

struct Attempt {
    MeridianSurface surface;
    std::vector<PointGeometry> geometry;
};

// Single RK4 attempt; throws GeometryError from any stage or the final state.
void rk4(const FlowState& s, const CurvatureFunction& f, double dt, Attempt& out) {
    const int N = s.surface.K + 1;
    std::vector<double> k1(N), k2(N), k3(N), k4(N);
    MeridianSurface stage = s.surface;
    std::vector<PointGeometry> g;
    auto stage_eval = [&](const std::vector<double>& dir, double c, std::vector<double>& k) {
        for (int i = 0; i < N; ++i) stage.u[i] = s.surface.u[i] + c * dir[i];
        compute_geometry(stage, &f, g);
        eval_rhs(s.kind, g, k);
    };
    eval_rhs(s.kind, s.geometry, k1);
    stage_eval(k1, 0.5 * dt, k2);
    stage_eval(k2, 0.5 * dt, k3);
    stage_eval(k3, dt, k4);
    out.surface = s.surface;
    for (int i = 0; i < N; ++i) {
        out.surface.u[i] = s.surface.u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(out.surface.u[i])) throw GeometryError(GeometryFailure::NonFinite, i);
    }
    compute_geometry(out.surface, &f, out.geometry);
}

}  // namespace

FlowState make_state(FlowKind kind, MeridianSurface surface, const CurvatureFunction& f) {
    const SpaceTag want = kind == FlowKind::InverseDeSitter ? SpaceTag::DeSitter : SpaceTag::Hyperbolic;
    if (surface.space != want) throw DomainError("flow kind does not match the surface's space");
    FlowState s;
    s.kind = kind;
    s.surface = std::move(surface);
    compute_geometry(s.surface, &f, s.geometry);
    const DiagnosticsRow row = diagnostics(s.geometry, 0.0, s.surface.n);
    s.monitor.initial = row;
    s.monitor.observe(row);
    std::vector<double> du(s.geometry.size());
    eval_rhs(kind, s.geometry, du);
    if (wrong_sign(kind, du)) ++s.monitor.nonmonotone_steps;
    return s;
}

namespace {

void commit(FlowState& s, Attempt& a, double dt) {
    s.surface = std::move(a.surface);
    s.geometry = std::move(a.geometry);
    s.t += dt;
    s.dt = dt;
    ++s.steps;
    s.monitor.observe(diagnostics(s.geometry, s.t, s.surface.n));
    std::vector<double> du(s.geometry.size());
    eval_rhs(s.kind, s.geometry, du);
    if (wrong_sign(s.kind, du)) ++s.monitor.nonmonotone_steps;
}

[[noreturn]] void fail(const FlowState& s, GeometryFailure cause, int index) {
    throw StepFailure("step failure at t = " + std::to_string(s.t) + ": " + to_string(cause) + " at grid index " +
                          std::to_string(index),
                      cause, index);
}

}  // namespace

void step(FlowState& s, const CurvatureFunction& f, double dt, const FlowParams& p) {
    Attempt a;
    GeometryFailure cause = GeometryFailure::NonFinite;
    int index = -1;
    for (int halving = 0; halving <= p.max_halvings && dt >= p.dt_min; ++halving) {
        try {
            rk4(s, f, dt, a);
        } catch (const GeometryError& e) {
            cause = e.kind();
            index = e.index();
            dt *= 0.5;
            ++s.rejected;
            continue;
        }
        commit(s, a, dt);
        return;
    }
    fail(s, cause, index);
}

bool reached_stop(const FlowState& s, const FlowParams& p) {
    if (s.kind == FlowKind::InverseDeSitter) return s.surface.max_u() > -p.eps_stop;
    return s.surface.min_u() < p.eps_stop;
}

namespace {

double next_dt(const FlowState& s, const FlowParams& p) {
    double dt = adaptive_dt(s.kind, s.geometry, s.surface.K, p);
    if (p.dt_fixed > 0.0) dt = std::min(dt, p.dt_fixed);
    return dt;
}

void record(FlowState& s, double dt) {
    DiagnosticsRow row = diagnostics(s.geometry, s.t, s.surface.n);
    row.dt = dt;
    s.history.push_back(row);
}

bool due(const FlowState& s, const FlowParams& p) {
    return p.record_interval > 0 && s.steps % p.record_interval == 0;
}

}  // namespace

FlowResult run_flow(FlowKind kind, MeridianSurface initial, const CurvatureFunction& f, const FlowParams& p,
                    const RecordCallback& on_record) {
    FlowResult r;
    r.state = make_state(kind, std::move(initial), f);
    FlowState& s = r.state;
    record(s, 0.0);
    if (on_record) on_record(s);
    bool last_recorded = true;
    while (true) {
        if (reached_stop(s, p)) {
            r.exit_reason = ExitReason::ReachedStop;
            break;
        }
        if (s.t >= p.t_max) {
            r.exit_reason = ExitReason::ReachedTMax;
            break;
        }
        double dt = next_dt(s, p);
        const bool clipped = s.t + dt >= p.t_max;
        if (clipped) dt = p.t_max - s.t;
        try {
            step(s, f, dt, p);
        } catch (const StepFailure& e) {
            r.exit_reason = ExitReason::StepFailure;
            r.failure_message = e.what();
            break;
        }
        if (clipped && s.dt == dt) s.t = p.t_max;
        last_recorded = due(s, p);
        if (last_recorded) {
            record(s, s.dt);
            if (on_record) on_record(s);
        }
    }
    if (!last_recorded) {
        record(s, s.dt);
        if (on_record) on_record(s);
    }
    return r;
}

DualPairResult run_dual_pair(const MeridianSurface& initial_n, const CurvatureFunction& f, const FlowParams& p,
                             const DualPairCallback& on_record) {
    DualPairResult r;
    const CurvatureFunction f_tilde = dual(f);
    r.n_side.state = make_state(FlowKind::InverseDeSitter, initial_n, f);
    r.h_side.state = make_state(FlowKind::DirectHyperbolic, dualize_inverse(initial_n), f_tilde);
    FlowState& a = r.n_side.state;
    FlowState& b = r.h_side.state;

    auto rec = [&](double dt) {
        record(a, dt);
        record(b, dt);
        const double d = meridian_distance(dualize(b.surface), a.surface);
        r.dual_distance.push_back(d);
        r.max_dual_distance = std::max(r.max_dual_distance, d);
        if (on_record) on_record(a, b, d);
    };
    rec(0.0);
    bool last_recorded = true;
    ExitReason reason = ExitReason::ReachedStop;
    std::string message;
    while (true) {
        if (reached_stop(a, p) || reached_stop(b, p)) break;
        if (a.t >= p.t_max) {
            reason = ExitReason::ReachedTMax;
            break;
        }
        double dt = std::min(next_dt(a, p), next_dt(b, p));
        const bool clipped = a.t + dt >= p.t_max;
        if (clipped) dt = p.t_max - a.t;
        // both sides must accept the same dt
        Attempt ta, tb;
        bool ok = false;
        for (int halving = 0; halving <= p.max_halvings && dt >= p.dt_min; ++halving) {
            try {
                rk4(a, f, dt, ta);
                rk4(b, f_tilde, dt, tb);
            } catch (const GeometryError& e) {
                message = std::string(to_string(e.kind())) + " at grid index " + std::to_string(e.index());
                dt *= 0.5;
                ++a.rejected;
                ++b.rejected;
                continue;
            }
            ok = true;
            break;
        }
        if (!ok) {
            reason = ExitReason::StepFailure;
            message = "step failure at t = " + std::to_string(a.t) + ": " + message;
            break;
        }
        const bool whole = clipped && dt == p.t_max - a.t;
        commit(a, ta, dt);
        commit(b, tb, dt);
        if (whole) a.t = b.t = p.t_max;
        last_recorded = due(a, p);
        if (last_recorded) rec(a.dt);
    }
    if (!last_recorded) {
        try {
            rec(a.dt);
        } catch (const GeometryError&) {
            r.dual_distance.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    r.n_side.exit_reason = r.h_side.exit_reason = reason;
    r.n_side.failure_message = r.h_side.failure_message = reason == ExitReason::StepFailure ? message : "";
    return r;
}

}  // namespace dualflow
