// Acceptance runner: one PASS/FAIL line per criterion on stdout, details on stderr.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dualflow/config.hpp"
#include "dualflow/duality.hpp"
#include "dualflow/execute.hpp"
#include "dualflow/flow.hpp"
#include "dualflow/verify.hpp"

using namespace dualflow;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::mutex g_log_mutex;

template <class... A>
void log(const char* fmt, A... args) {
    std::lock_guard lock(g_log_mutex);
    std::fprintf(stderr, fmt, args...);
    std::fflush(stderr);
}

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

void run_parallel(std::vector<std::function<void()>>& jobs) {
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), jobs.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < jobs.size();) jobs[i]();
        });
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------- 1

void curvature_inequalities() {
    double worst = 1e300;
    std::string worst_where;
    bool ok = true;
    for (const char* name : {"pm:1", "pm:2", "pm:4"})
        for (int n : {2, 3, 5}) {
            const PropertyReport r = property_suite(parse_curvature_function(name, n), 10000, 1);
            for (const auto& c : r.checks) {
                if (c.min_margin < worst) {
                    worst = c.min_margin;
                    worst_where = std::string(name) + " n=" + std::to_string(n) + " '" + c.name + "'";
                }
                if (c.min_margin < -1e-10 || c.violations > 0) ok = false;
            }
        }
    const PropertyReport geo = property_suite(geometric_mean(2), 10000, 1);
    const InequalityCheck* c = geo.find("sum F_i <= 1");
    const bool control = c && c->violations > 0;
    report(1, "curvature inequalities", ok && control,
           "min margin " + fmt("%.3e", worst) + " at " + worst_where + "; geo control violations " +
               std::to_string(c ? c->violations : 0));
}

// ---------------------------------------------------------------- 2

void duality_exactness() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int bound_ok = 0, ratio_ok = 0, h_ratio_ok = 0;
    double worst = 0.0;
    const int samples = 10;
    for (int i = 0; i < samples; ++i) {
        const double c = 0.5 + U(rng);
        const double a = 0.1 * c * U(rng);
        const int m = U(rng) < 0.5 ? 2 : 3;
        const auto m1 = perturbed_surface(SpaceTag::Hyperbolic, 2, 512, c, a, m);
        const auto m2 = perturbed_surface(SpaceTag::Hyperbolic, 2, 1024, c, a, m);
        const auto r1 = duality_report(m1, dualize(m1));
        const auto r2 = duality_report(m2, dualize(m2));
        const double q = r1.kappa_product_residual / r2.kappa_product_residual;
        const double qh = r1.h_identity_residual / r2.h_identity_residual;
        log("  duality c=%.4f a=%.4f m=%d: kappa residual %.3e (ratio %.2f), h residual %.3e (ratio %.2f)\n", c, a,
            m, r1.kappa_product_residual, q, r1.h_identity_residual, qh);
        worst = std::max(worst, r1.kappa_product_residual);
        bound_ok += r1.kappa_product_residual <= 1e-3;
        ratio_ok += q >= 3.0 && q <= 5.0;
        h_ratio_ok += qh >= 3.0 && qh <= 5.0;
    }
    const bool pass = bound_ok == samples && ratio_ok == samples && h_ratio_ok == samples;
    report(2, "duality exactness", pass,
           "bound " + std::to_string(bound_ok) + "/10 (worst " + fmt("%.3e", worst) + "), kappa ratio " +
               std::to_string(ratio_ok) + "/10, h ratio " + std::to_string(h_ratio_ok) + "/10");
}

// ---------------------------------------------------------------- 3

void sphere_slice() {
    double err = 0.0;
    for (double r : {0.5, 1.0, 1.5, 2.0}) {
        const auto d = dualize(sphere_surface(2, 256, r));
        for (double u : d.u) err = std::max(err, std::abs(u + r));
    }
    report(3, "sphere/slice correspondence", err <= 1e-8, "sup error " + fmt("%.3e", err));
}

// ---------------------------------------------------------------- 4

void spherical_oracle_flows() {
    const auto f = power_mean(2, 2);
    const double T = spherical_stop_time(1.0);
    FlowParams p;
    p.dt_fixed = 1e-4;

    double rel = 0.0;
    const auto rn = run_flow(FlowKind::InverseDeSitter, slice_surface(2, 64, -1.0), f, p, [&](const FlowState& s) {
        if (s.t > 0.4) return;
        const double exact = std::cosh(1.0) * std::exp(-s.t);
        for (double u : s.surface.u) rel = std::max(rel, std::abs(std::cosh(u) - exact) / exact);
    });
    const auto rh = run_flow(FlowKind::DirectHyperbolic, sphere_surface(2, 64, 1.0), dual(f), p);
    const double en = std::abs(rn.state.t - T), eh = std::abs(rh.state.t - T);
    const bool pass = rel <= 1e-6 && rn.exit_reason == ExitReason::ReachedStop &&
                      rh.exit_reason == ExitReason::ReachedStop && en <= 1e-3 && eh <= 1e-3;
    report(4, "spherical flow oracle", pass,
           "rel err " + fmt("%.3e", rel) + ", N stop " + fmt("%.6f", rn.state.t) + ", H stop " +
               fmt("%.6f", rh.state.t) + ", T* " + fmt("%.6f", T));
}

// ---------------------------------------------------------------- 5, 6, 7 (and the runs for 9)

double g_pair_distance = 0.0;
bool g_pair_failed = false;

struct MatrixRun {
    int n, m, K;
    double a;
    std::string F;
    FlowResult result;
    double seconds = 0.0;
};

double overshoot(double later, double initial) { return std::max(0.0, later - initial); }

void flow_matrix_and_dual_pairs() {
    std::vector<MatrixRun> runs;
    for (int K : {128, 256})
        for (int n : {2, 3})
            for (const char* F : {"pm:1", "pm:2", "pm:4"})
                for (double a : {0.05, 0.1})
                    for (int m : {2, 3}) runs.push_back(MatrixRun{n, m, K, a, F, {}});

    struct PairRun {
        std::string label;
        MeridianSurface init;
        DualPairResult result;
    };
    std::vector<PairRun> pairs;
    pairs.push_back({"slice", slice_surface(2, 256, -1.0), {}});
    pairs.push_back({"perturbed", perturbed_surface(SpaceTag::DeSitter, 2, 256, -1.0, 0.03, 2), {}});

    std::vector<std::function<void()>> jobs;
    for (auto& pr : pairs)
        jobs.push_back([&pr] {
            FlowParams p;
            p.record_interval = 100;
            pr.result = run_dual_pair(pr.init, power_mean(2, 2), p);
            log("  dual pair %s: t=%.5f max distance %.3e\n", pr.label.c_str(), pr.result.n_side.state.t,
                pr.result.max_dual_distance);
        });
    for (auto& r : runs)
        jobs.push_back([&r] {
            const auto start = std::chrono::steady_clock::now();
            FlowParams p;
            p.record_interval = 100;
            r.result = run_flow(FlowKind::InverseDeSitter, perturbed_surface(SpaceTag::DeSitter, r.n, r.K, -1.0, r.a, r.m),
                                parse_curvature_function(r.F, r.n), p);
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const auto& M = r.result.state.monitor;
            log("  K=%d n=%d %s a=%.2f m=%d: %s t=%.5f %.1fs pinch %.4f -> max %.4f last %.5f\n", r.K, r.n,
                r.F.c_str(), r.a, r.m, to_string(r.result.exit_reason), r.result.state.t, r.seconds,
                M.initial.pinch_ratio, M.max_pinch_ratio, M.last_pinch_ratio);
        });
    run_parallel(jobs);

    // 5: monotone test functions
    bool ok5 = true;
    double worst_F_chi = 0.0, worst_pinch = 0.0, coarse_worst = 0.0;
    for (const auto& r : runs) {
        const auto& M = r.result.state.monitor;
        const double o1 = overshoot(M.max_w_F_chi, M.initial.w_F_chi);
        const double o2 = overshoot(M.max_w_pinch, M.initial.w_pinch);
        if (r.K == 128) {
            coarse_worst = std::max({coarse_worst, o1, o2});
            continue;
        }
        worst_F_chi = std::max(worst_F_chi, o1);
        worst_pinch = std::max(worst_pinch, o2);
        if (o1 > 1e-3 || o2 > 1e-3 || r.result.exit_reason == ExitReason::StepFailure) ok5 = false;
    }
    const bool shrinks = std::max(worst_F_chi, worst_pinch) <= coarse_worst;
    report(5, "monotone test functions", ok5 && shrinks,
           "K=256 overshoot w_F_chi " + fmt("%.3e", worst_F_chi) + ", w_pinch " + fmt("%.3e", worst_pinch) +
               "; K=128 worst " + fmt("%.3e", coarse_worst));

    // 6: pinching boundedness
    bool ok6 = true;
    int converged = 0, fine_runs = 0;
    double worst_ratio = 0.0;
    for (const auto& r : runs) {
        if (r.K != 256) continue;
        ++fine_runs;
        const auto& M = r.result.state.monitor;
        const double min_u0 = -1.0 - r.a;
        const double c0 = r.n * std::exp(M.initial.w_pinch + 2.0 * r.n * std::log(std::cosh(std::abs(min_u0))));
        const double bound = 1.05 * std::max(M.initial.pinch_ratio, c0);
        worst_ratio = std::max(worst_ratio, M.max_pinch_ratio / bound);
        if (M.max_pinch_ratio > bound) ok6 = false;
        if (M.last_pinch_ratio <= 1.01) ++converged;
    }
    report(6, "pinching boundedness", ok6,
           "max ratio / bound " + fmt("%.4f", worst_ratio) + "; final ratio <= 1.01 in " + std::to_string(converged) +
               "/" + std::to_string(fine_runs) + " runs (logged)");

    // 7: bounds suite
    bool ok7 = true;
    double max_min_u = -1e300, max_osc = 0.0, worst_growth = 0.0;
    for (const auto& r : runs) {
        if (r.K != 256) continue;
        const auto& M = r.result.state.monitor;
        for (const auto& row : r.result.state.history) max_min_u = std::max(max_min_u, row.min_u);
        max_osc = std::max(max_osc, M.max_osc_u);
        worst_growth = std::max({worst_growth, overshoot(M.max_v_tilde, M.initial.v_tilde_max),
                                 overshoot(M.max_chi, M.initial.chi_max), overshoot(M.max_F, M.initial.F_max)});
    }
    if (!(max_min_u < 0.0) || !(max_osc < std::sinh(std::numbers::pi)) || worst_growth > 1e-3) ok7 = false;
    report(7, "bounds suite", ok7,
           "largest min u " + fmt("%.3e", max_min_u) + ", max osc u " + fmt("%.4f", max_osc) +
               ", max growth of v~, chi, F above initial " + fmt("%.3e", worst_growth));

    for (const auto& pr : pairs) {
        g_pair_distance = std::max(g_pair_distance, pr.result.max_dual_distance);
        if (pr.result.n_side.exit_reason == ExitReason::StepFailure ||
            pr.result.h_side.exit_reason == ExitReason::StepFailure)
            g_pair_failed = true;
    }
}

// ---------------------------------------------------------------- 9

void dual_pair_tracking() {
    report(9, "dual-pair tracking", !g_pair_failed && g_pair_distance <= 5e-3,
           "max distance " + fmt("%.3e", g_pair_distance) + (g_pair_failed ? ", step failure" : ""));
}

// ---------------------------------------------------------------- 8

void evolution_residuals_check() {
    const auto f = power_mean(1, 2);
    ResidualStudy study;
    study.resolutions = {{128, 2e-5}, {256, 1e-5}};
    const auto rep = refinement_study(study, f);
    const auto& row = rep.rows.back();
    const bool ratios = row.ratio_chi >= 3.0 && row.ratio_chi <= 5.0 && row.ratio_F >= 3.0 && row.ratio_F <= 5.0;

    double slice_res = 0.0;
    for (const auto& [K, dt] : study.resolutions) {
        const auto traj = evolve_lagrangian(slice_surface(2, K, -1.0), f, study.t_end, dt, study.sample_stride);
        const auto r = evolution_residuals(traj, f);
        slice_res = std::max({slice_res, r.chi, r.F});
    }

    const auto traj = evolve_lagrangian(perturbed_surface(SpaceTag::DeSitter, 2, 256, -1.0, 0.05, 2), f, study.t_end,
                                        1e-5, study.sample_stride);
    const auto order = time_order_study(traj, f);
    const bool time_ok = order.ratio >= 3.0 && order.ratio <= 5.0;

    report(8, "evolution-equation residuals", ratios && slice_res <= 1e-6 && time_ok,
           "ratio chi " + fmt("%.3f", row.ratio_chi) + ", ratio F " + fmt("%.3f", row.ratio_F) + ", slice " +
               fmt("%.3e", slice_res) + ", time-window ratio " + fmt("%.3f", order.ratio));
}

// ---------------------------------------------------------------- 10

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void determinism() {
    const fs::path base = fs::temp_directory_path() / "dualflow_acceptance";
    fs::remove_all(base);
    std::string csv[2];
    int codes[2];
    for (int i = 0; i < 2; ++i) {
        auto cfg = parse_config(
            "preset = inverse_desitter\nn = 2\nK = 64\nF = pm:2\ninitial = perturbed:-1,0.05,2\nseed = 7\n"
            "record_interval = 50\n");
        cfg.output = (base / ("run" + std::to_string(i))).string();
        codes[i] = execute(cfg);
        csv[i] = slurp(fs::path(cfg.output) / "diagnostics.csv");
    }
    const bool pass = codes[0] == kExitOk && codes[1] == kExitOk && !csv[0].empty() && csv[0] == csv[1];
    report(10, "determinism", pass, std::to_string(csv[0].size()) + " bytes, identical: " + (csv[0] == csv[1] ? "yes" : "no"));
}

}  // namespace

int main() {
    curvature_inequalities();
    duality_exactness();
    sphere_slice();
    spherical_oracle_flows();
    flow_matrix_and_dual_pairs();
    evolution_residuals_check();
    dual_pair_tracking();
    determinism();
    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
