#include "dualflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dualflow/error.hpp"
#include "dualflow/resample.hpp"

namespace dualflow {

std::vector<PointGeometry> LagrangianTrajectory::geometry(std::size_t sample, const CurvatureFunction& f) const {
    std::vector<PointGeometry> g;
    compute_curve_geometry(SpaceTag::DeSitter, n, positions.at(sample), &f, g);
    return g;
}

std::vector<double> LagrangianTrajectory::latitudes(std::size_t sample) const {
    const auto& p = positions.at(sample);
    std::vector<double> th(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) th[k] = std::atan2(p[k][2], p[k][1]);
    th.front() = 0.0;
    th.back() = std::numbers::pi;
    return th;
}

namespace {

void velocity(int n, const std::vector<Vec3>& x, const CurvatureFunction& f, std::vector<PointGeometry>& g,
              std::vector<Vec3>& out) {
    compute_curve_geometry(SpaceTag::DeSitter, n, x, &f, g);
    out.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = -g[k].nu / g[k].F;
}

}  // namespace

LagrangianTrajectory evolve_lagrangian(const MeridianSurface& s, const CurvatureFunction& f, double t_end, double dt,
                                       int sample_stride) {
    if (s.space != SpaceTag::DeSitter) throw DomainError("Lagrangian tracking runs in N");
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw DomainError("Lagrangian tracking needs dt > 0 and t_end >= 0");
    if (sample_stride < 1) throw DomainError("sample stride must be positive");
    LagrangianTrajectory tr;
    tr.n = s.n;
    tr.K = s.K;
    tr.dt = dt;
    tr.sample_stride = sample_stride;
    const int N = s.K + 1;
    std::vector<Vec3> x(N);
    for (int k = 0; k < N; ++k) x[k] = embed(s, k).head<3>();

    const long steps = std::lround(t_end / dt);
    std::vector<PointGeometry> g;
    std::vector<Vec3> k1, k2, k3, k4, stage(N);
    auto keep = [&](double t) {
        tr.times.push_back(t);
        tr.positions.push_back(x);
        const auto th = tr.latitudes(tr.positions.size() - 1);
        for (int k = 1; k < N; ++k)
            if (!(th[k] > th[k - 1])) tr.latitudes_monotone = false;
    };
    keep(0.0);
    for (long i = 1; i <= steps; ++i) {
        velocity(s.n, x, f, g, k1);
        for (int k = 0; k < N; ++k) stage[k] = x[k] + 0.5 * dt * k1[k];
        velocity(s.n, stage, f, g, k2);
        for (int k = 0; k < N; ++k) stage[k] = x[k] + 0.5 * dt * k2[k];
        velocity(s.n, stage, f, g, k3);
        for (int k = 0; k < N; ++k) stage[k] = x[k] + dt * k3[k];
        velocity(s.n, stage, f, g, k4);
        for (int k = 0; k < N; ++k) {
            Vec3 y = x[k] + dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
            const double q = quadratic_form(y);
            if (!(q > 0.0) || !std::isfinite(q)) throw GeometryError(GeometryFailure::NonFinite, k);
            y /= std::sqrt(q);
            if (k == 0 || k == N - 1) y[2] = 0.0;
            tr.max_quadric_residual = std::max(tr.max_quadric_residual, std::abs(quadratic_form(y) - 1.0));
            x[k] = y;
        }
        if (i % sample_stride == 0) keep(i * dt);
    }
    return tr;
}

namespace {

// Per-sample fields needed by the residuals.
struct SampleFields {
    std::vector<PointGeometry> g;
    std::vector<double> chi, F;
};

SampleFields sample_fields(const LagrangianTrajectory& tr, std::size_t m, const CurvatureFunction& f) {
    SampleFields s;
    s.g = tr.geometry(m, f);
    s.chi.resize(s.g.size());
    s.F.resize(s.g.size());
    for (std::size_t k = 0; k < s.g.size(); ++k) {
        s.chi[k] = s.g[k].chi;
        s.F[k] = s.g[k].F;
    }
    return s;
}

struct Derivs {
    double xi = 0.0, xixi = 0.0;
};

// second-order differences of an even field along the particle label
Derivs label_derivs(const std::vector<double>& v, int k, double h) {
    const int K = static_cast<int>(v.size()) - 1;
    const double m1 = v[reflect_index(k - 1, K)], p1 = v[reflect_index(k + 1, K)];
    return {(p1 - m1) / (2.0 * h), ((p1 - v[k]) + (m1 - v[k])) / (h * h)};
}

struct Operator {
    double L = 0.0;    // F^{ij} f_{;ij}
    double grad2 = 0.0;  // F^{ij} f_i f_j
};

// F^{ij} f_{;ij} on an axisymmetric field: meridian arclength Hessian plus
// (n - 1) copies of the orbit term rho_s f_s / rho.
Operator apply_operator(const PointGeometry& p, const Derivs& d, double g_xi, bool axis) {
    const double g = p.g_mer;
    const double f_ss = (d.xixi - 0.5 * g_xi / g * d.xi) / g;
    const double f_rot = axis ? f_ss : p.x_theta[2] * d.xi / (g * p.x[2]);
    return {p.F_mer * f_ss + (p.n - 1) * p.F_rot * f_rot, p.F_mer * d.xi * d.xi / g};
}

struct PointResiduals {
    double chi, F, Phi;
};

PointResiduals point_residuals(const SampleFields& now, const SampleFields& before, const SampleFields& after,
                               double span, int k, double h) {
    const PointGeometry& p = now.g[k];
    const int K = static_cast<int>(now.g.size()) - 1;
    const bool axis = (k == 0 || k == K);
    const double g_xi = axis ? 0.0 : (now.g[k + 1].g_mer - now.g[k - 1].g_mer) / (2.0 * h);
    const double F = p.F;
    const double phi = -1.0 / F, phi_dot = 1.0 / (F * F);
    const double S = p.sum_F_i_kappa2;
    const double trace = p.sum_F_i;
    const double hbar_n = -std::tanh(p.u);

    const double chi_t = (after.chi[k] - before.chi[k]) / span;
    const Operator Lchi = apply_operator(p, label_derivs(now.chi, k, h), g_xi, axis);
    const double r_chi = chi_t - phi_dot * Lchi.L + phi_dot * S * now.chi[k] - (phi_dot * F + phi) * hbar_n * now.chi[k];

    const double F_t = (after.F[k] - before.F[k]) / span;
    const Derivs dF = label_derivs(now.F, k, h);
    const Operator LF = apply_operator(p, dF, g_xi, axis);
    const double r_F = F_t - phi_dot * LF.L - phi_dot * S * F + 2.0 / F * phi_dot * LF.grad2 +
                       kAmbientCurvatureDeSitter * phi_dot * trace * F;

    // Phi = -1/F through the chain rule on the same discrete derivatives
    const double Phi_t = F_t / (F * F);
    const Derivs dPhi{dF.xi / (F * F), dF.xixi / (F * F) - 2.0 * dF.xi * dF.xi / (F * F * F)};
    const Operator LPhi = apply_operator(p, dPhi, g_xi, axis);
    const double r_Phi = Phi_t - phi_dot * LPhi.L + phi_dot * S * phi - kAmbientCurvatureDeSitter * phi_dot * trace * phi;
    return {r_chi, r_F, r_Phi};
}

template <class Visit>
void for_each_residual(const LagrangianTrajectory& tr, const CurvatureFunction& f, int window, int margin,
                       Visit&& visit) {
    if (window < 1) throw DomainError("residual window must be positive");
    if (margin < window) margin = window;
    const int M = static_cast<int>(tr.times.size());
    if (M < 5 || M - 2 * margin < 1) throw DomainError("trajectory has too few samples for the residual window");
    const double h = std::numbers::pi / tr.K;
    std::vector<SampleFields> cache(M);
    std::vector<bool> have(M, false);
    auto get = [&](int m) -> const SampleFields& {
        if (!have[m]) {
            cache[m] = sample_fields(tr, m, f);
            have[m] = true;
        }
        return cache[m];
    };
    for (int m = margin; m < M - margin; ++m) {
        const SampleFields& now = get(m);
        const SampleFields& before = get(m - window);
        const SampleFields& after = get(m + window);
        const double span = tr.times[m + window] - tr.times[m - window];
        for (int k = 0; k <= tr.K; ++k) visit(m, k, point_residuals(now, before, after, span, k, h), now.F[k]);
        // samples older than the window are no longer needed
        if (m - window - 1 >= 0 && have[m - window - 1]) {
            cache[m - window - 1] = SampleFields{};
            have[m - window - 1] = false;
        }
    }
}

}  // namespace

EvolutionResiduals evolution_residuals(const LagrangianTrajectory& tr, const CurvatureFunction& f, int window,
                                       int margin) {
    EvolutionResiduals r;
    int last_m = -1;
    for_each_residual(tr, f, window, margin, [&](int m, int, const PointResiduals& p, double F) {
        r.chi = std::max(r.chi, std::abs(p.chi));
        r.F = std::max(r.F, std::abs(p.F));
        r.Phi = std::max(r.Phi, std::abs(p.Phi));
        r.Phi_vs_F = std::max(r.Phi_vs_F, std::abs(F * F * p.Phi - p.F));
        if (m != last_m) {
            ++r.samples_used;
            last_m = m;
        }
    });
    return r;
}

std::vector<double> chi_residual_field(const LagrangianTrajectory& tr, const CurvatureFunction& f, int window,
                                       int margin) {
    std::vector<double> out;
    for_each_residual(tr, f, window, margin, [&](int, int, const PointResiduals& p, double) { out.push_back(p.chi); });
    return out;
}

double residual_chi(const LagrangianTrajectory& tr, const CurvatureFunction& f) {
    return evolution_residuals(tr, f).chi;
}

double residual_F(const LagrangianTrajectory& tr, const CurvatureFunction& f) { return evolution_residuals(tr, f).F; }

RefinementReport refinement_study(const ResidualStudy& st, const CurvatureFunction& f) {
    RefinementReport rep;
    rep.label = f.label();
    for (const auto& [K, dt] : st.resolutions) {
        const MeridianSurface s = perturbed_surface(SpaceTag::DeSitter, st.n, K, st.c, st.a, st.m);
        const LagrangianTrajectory tr = evolve_lagrangian(s, f, st.t_end, dt, st.sample_stride);
        const EvolutionResiduals r = evolution_residuals(tr, f);
        RefinementRow row{K, dt, r.chi, r.F, 0.0, 0.0};
        if (!rep.rows.empty()) {
            row.ratio_chi = rep.rows.back().residual_chi / r.chi;
            row.ratio_F = rep.rows.back().residual_F / r.F;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

TimeOrderResult time_order_study(const LagrangianTrajectory& tr, const CurvatureFunction& f, int w) {
    const int margin = 4 * w;
    const auto r1 = chi_residual_field(tr, f, w, margin);
    const auto r2 = chi_residual_field(tr, f, 2 * w, margin);
    const auto r4 = chi_residual_field(tr, f, 4 * w, margin);
    TimeOrderResult out;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        out.coarse_difference = std::max(out.coarse_difference, std::abs(r4[i] - r2[i]));
        out.fine_difference = std::max(out.fine_difference, std::abs(r2[i] - r1[i]));
    }
    out.ratio = out.coarse_difference / out.fine_difference;
    return out;
}

void write_refinement_report(std::ostream& os, const RefinementReport& rep) {
    std::ostringstream line;
    line << std::setprecision(17);
    os << "# " << rep.label << "\n";
    os << "K dt residual_chi ratio_chi residual_F ratio_F\n";
    for (const RefinementRow& r : rep.rows) {
        line.str("");
        line << r.K << ' ' << r.dt << ' ' << r.residual_chi << ' ' << r.ratio_chi << ' ' << r.residual_F << ' '
             << r.ratio_F << '\n';
        os << line.str();
    }
}

}  // namespace dualflow
