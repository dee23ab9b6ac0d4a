#include "dualflow/execute.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "dualflow/curvature.hpp"
#include "dualflow/duality.hpp"
#include "dualflow/error.hpp"
#include "dualflow/flow.hpp"
#include "dualflow/verify.hpp"

namespace dualflow {

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

void make_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) throw IoError("cannot create directory " + p.string());
}

class OutFile {
public:
    explicit OutFile(const fs::path& p) : path_(p), os_(p, std::ios::binary | std::ios::trunc) {
        if (!os_) throw IoError("cannot open " + p.string() + " for writing");
    }
    std::ostream& stream() { return os_; }
    void close() {
        os_.close();
        if (os_.fail()) throw IoError("failed writing " + path_.string());
    }

private:
    fs::path path_;
    std::ofstream os_;
};

struct Summary {
    std::vector<std::pair<std::string, std::string>> entries;
    void add(const std::string& k, const std::string& v) { entries.emplace_back(k, v); }
    void add(const std::string& k, double v) { add(k, num(v)); }
    void write(const fs::path& dir) const {
        OutFile f(dir / "summary.txt");
        for (const auto& [k, v] : entries) f.stream() << k << " = " << v << '\n';
        f.close();
    }
};

std::string csv_header(bool with_distance) {
    std::string h;
    for (const std::string& c : diagnostics_columns()) h += (h.empty() ? "" : ",") + c;
    if (with_distance) h += ",dual_distance";
    return h + '\n';
}

void csv_row(std::ostream& os, const DiagnosticsRow& row, const double* distance = nullptr) {
    std::string line;
    for (double v : diagnostics_values(row)) line += (line.empty() ? "" : ",") + num(v);
    if (distance) line += "," + num(*distance);
    os << line << '\n';
}

void write_snapshot_file(const fs::path& dir, const std::string& prefix, std::int64_t step,
                         const std::vector<PointGeometry>& g) {
    char name[64];
    std::snprintf(name, sizeof name, "%s%010lld.txt", prefix.c_str(), static_cast<long long>(step));
    OutFile f(dir / name);
    write_snapshot(f.stream(), g);
    f.close();
}

FlowParams flow_params(const RunConfig& c) {
    FlowParams p;
    p.t_max = c.t_max;
    p.eps_stop = c.eps_stop;
    p.c_cfl = c.c_cfl;
    p.dt_max = c.dt_max;
    p.dt_fixed = c.dt;
    p.record_interval = c.record_interval;
    return p;
}

void add_monitor(Summary& s, const FlowMonitor& m) {
    s.add("max_pinch_ratio", m.max_pinch_ratio);
    s.add("final_pinch_ratio", m.last_pinch_ratio);
    s.add("w_pinch_overshoot", m.max_w_pinch - m.initial.w_pinch);
    s.add("w_F_chi_overshoot", m.max_w_F_chi - m.initial.w_F_chi);
    s.add("nonmonotone_steps", std::to_string(m.nonmonotone_steps));
}

int run_single(const RunConfig& c, const fs::path& out, std::ostream* log) {
    const FlowKind kind = c.preset == Preset::InverseDeSitter ? FlowKind::InverseDeSitter : FlowKind::DirectHyperbolic;
    const CurvatureFunction F = parse_curvature_function(c.F, c.n);
    const CurvatureFunction f = kind == FlowKind::InverseDeSitter ? F : dual(F);
    const fs::path snaps = out / "snapshots";
    make_dir(snaps);
    OutFile csv(out / "diagnostics.csv");
    csv.stream() << csv_header(false);
    const FlowResult r = run_flow(kind, initial_surface(c), f, flow_params(c), [&](const FlowState& s) {
        csv_row(csv.stream(), s.history.back());
        write_snapshot_file(snaps, "step_", s.steps, s.geometry);
    });
    csv.close();

    Summary sum;
    sum.add("preset", to_string(c.preset));
    sum.add("exit_reason", to_string(r.exit_reason));
    sum.add("final_t", r.state.t);
    sum.add("steps", std::to_string(r.state.steps));
    add_monitor(sum, r.state.monitor);
    sum.add("rejected_steps", std::to_string(r.state.rejected));
    if (!r.failure_message.empty()) sum.add("failure", r.failure_message);
    sum.write(out);
    if (log)
        *log << to_string(c.preset) << ": " << to_string(r.exit_reason) << " at t = " << num(r.state.t) << " after "
             << r.state.steps << " steps\n";
    return r.exit_reason == ExitReason::StepFailure ? kExitStepFailure : kExitOk;
}

int run_pair(const RunConfig& c, const fs::path& out, std::ostream* log) {
    const CurvatureFunction F = parse_curvature_function(c.F, c.n);
    const fs::path snaps = out / "snapshots";
    make_dir(snaps);
    OutFile csv_n(out / "diagnostics.csv");
    OutFile csv_h(out / "diagnostics_h.csv");
    csv_n.stream() << csv_header(true);
    csv_h.stream() << csv_header(false);
    const DualPairResult r =
        run_dual_pair(initial_surface(c), F, flow_params(c), [&](const FlowState& a, const FlowState& b, double d) {
            csv_row(csv_n.stream(), a.history.back(), &d);
            csv_row(csv_h.stream(), b.history.back());
            write_snapshot_file(snaps, "n_step_", a.steps, a.geometry);
            write_snapshot_file(snaps, "h_step_", b.steps, b.geometry);
        });
    csv_n.close();
    csv_h.close();

    const FlowState& a = r.n_side.state;
    const FlowState& b = r.h_side.state;
    Summary sum;
    sum.add("preset", to_string(c.preset));
    sum.add("exit_reason", to_string(r.n_side.exit_reason));
    sum.add("final_t", a.t);
    sum.add("steps", std::to_string(a.steps));
    add_monitor(sum, a.monitor);
    sum.add("max_dual_distance", r.max_dual_distance);
    sum.add("n_stopped", reached_stop(a, flow_params(c)) ? "true" : "false");
    sum.add("h_stopped", reached_stop(b, flow_params(c)) ? "true" : "false");
    sum.add("h_max_pinch_ratio", b.monitor.max_pinch_ratio);
    if (!r.n_side.failure_message.empty()) sum.add("failure", r.n_side.failure_message);
    sum.write(out);
    if (log)
        *log << "dual_pair: " << to_string(r.n_side.exit_reason) << " at t = " << num(a.t)
             << ", max dual distance " << num(r.max_dual_distance) << '\n';
    return r.n_side.exit_reason == ExitReason::StepFailure ? kExitStepFailure : kExitOk;
}

int run_property(const RunConfig& c, const fs::path& out, std::ostream* log) {
    const CurvatureFunction F = parse_curvature_function(c.F, c.n);
    const PropertyReport rep = property_suite(F, c.samples, c.seed);
    OutFile f(out / "property.txt");
    f.stream() << "# " << rep.function_label << " n=" << rep.dimension << " samples=" << rep.samples
               << " tolerance=" << num(rep.tolerance) << '\n';
    f.stream() << "check|min_margin|violations|result\n";
    for (const InequalityCheck& ch : rep.checks) {
        const bool pass = ch.violations == 0;
        f.stream() << ch.name << '|' << num(ch.min_margin) << '|' << ch.violations << '|'
                   << (pass ? "pass" : "fail") << '\n';
        if (log) *log << (pass ? "pass  " : "FAIL  ") << ch.name << '\n';
    }
    f.close();
    Summary sum;
    sum.add("preset", to_string(c.preset));
    sum.add("exit_reason", "completed");
    sum.add("all_pass", rep.all_pass() ? "true" : "false");
    sum.write(out);
    return kExitOk;
}

int run_duality(const RunConfig& c, const fs::path& out, std::ostream* log) {
    std::vector<MeridianSurface> levels{initial_surface(c)};
    if (c.initial.kind != InitialSpec::Kind::File)
        levels.push_back(perturbed_surface(SpaceTag::Hyperbolic, c.n, 2 * c.K, c.initial.c, c.initial.a,
                                           c.initial.kind == InitialSpec::Kind::Slice ? 0 : c.initial.m));
    OutFile f(out / "duality.txt");
    f.stream() << "K kappa_product_residual ratio h_identity_residual ratio orthogonality_residual "
                  "resampling_error round_trip_distance\n";
    double prev_k = 0.0, prev_h = 0.0, worst_k = 0.0;
    for (const MeridianSurface& m : levels) {
        double err = 0.0;
        const MeridianSurface d = dualize(m, &err);
        DualityReport r = duality_report(m, d);
        r.resampling_error = err;
        const double round_trip = meridian_distance(dualize_inverse(d), m);
        f.stream() << r.K << ' ' << num(r.kappa_product_residual) << ' '
                   << num(prev_k > 0.0 ? prev_k / r.kappa_product_residual : 0.0) << ' '
                   << num(r.h_identity_residual) << ' ' << num(prev_h > 0.0 ? prev_h / r.h_identity_residual : 0.0)
                   << ' ' << num(r.orthogonality_residual) << ' ' << num(r.resampling_error) << ' '
                   << num(round_trip) << '\n';
        if (log) *log << "K = " << r.K << ": max |kappa kappa~ - 1| = " << num(r.kappa_product_residual) << '\n';
        prev_k = r.kappa_product_residual;
        prev_h = r.h_identity_residual;
        if (worst_k == 0.0) worst_k = r.kappa_product_residual;
    }
    f.close();
    Summary sum;
    sum.add("preset", to_string(c.preset));
    sum.add("exit_reason", "completed");
    sum.add("kappa_product_residual", worst_k);
    sum.write(out);
    return kExitOk;
}

int run_residuals(const RunConfig& c, const fs::path& out, std::ostream* log) {
    const CurvatureFunction F = parse_curvature_function(c.F, c.n);
    const double dt = c.dt > 0.0 ? c.dt : 1e-5 * (256.0 / c.K) * (256.0 / c.K);
    RefinementReport rep;
    rep.label = F.label();
    std::vector<std::pair<int, double>> levels;
    if (c.initial.kind != InitialSpec::Kind::File) levels.emplace_back(c.K / 2, 2.0 * dt);
    levels.emplace_back(c.K, dt);
    constexpr int stride = 10;
    LagrangianTrajectory finest;
    for (const auto& [K, step] : levels) {
        RunConfig lc = c;
        lc.K = K;
        const LagrangianTrajectory tr = evolve_lagrangian(initial_surface(lc), F, c.t_end, step, stride);
        const EvolutionResiduals r = evolution_residuals(tr, F);
        RefinementRow row{K, step, r.chi, r.F, 0.0, 0.0};
        if (!rep.rows.empty()) {
            row.ratio_chi = rep.rows.back().residual_chi / r.chi;
            row.ratio_F = rep.rows.back().residual_F / r.F;
        }
        rep.rows.push_back(row);
        if (log) *log << "K = " << K << ": chi residual " << num(r.chi) << ", F residual " << num(r.F) << '\n';
        finest = tr;
    }
    const TimeOrderResult order = time_order_study(finest, F);
    OutFile f(out / "residuals.txt");
    write_refinement_report(f.stream(), rep);
    f.stream() << "# time order (windows w, 2w, 4w): " << num(order.coarse_difference) << ' '
               << num(order.fine_difference) << " ratio " << num(order.ratio) << '\n';
    f.close();
    Summary sum;
    sum.add("preset", to_string(c.preset));
    sum.add("exit_reason", "completed");
    sum.add("residual_chi", rep.rows.back().residual_chi);
    sum.add("residual_F", rep.rows.back().residual_F);
    sum.add("time_order_ratio", order.ratio);
    sum.write(out);
    return kExitOk;
}

}  // namespace

int execute(const RunConfig& c, std::ostream* log) {
    const fs::path out(c.output);
    try {
        make_dir(out);
        switch (c.preset) {
            case Preset::InverseDeSitter:
            case Preset::DirectHyperbolic: return run_single(c, out, log);
            case Preset::DualPair: return run_pair(c, out, log);
            case Preset::PropertySuite: return run_property(c, out, log);
            case Preset::DualityCheck: return run_duality(c, out, log);
            case Preset::ResidualCheck: return run_residuals(c, out, log);
        }
    } catch (const IoError& e) {
        if (log) *log << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const GeometryError& e) {
        if (log) *log << "error: " << e.what() << '\n';
        return kExitStepFailure;
    } catch (const DomainError& e) {
        if (log) *log << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace dualflow
