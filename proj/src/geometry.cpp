#include "dualflow/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "dualflow/error.hpp"
#include "dualflow/resample.hpp"

namespace dualflow {

MeridianSurface::MeridianSurface(SpaceTag space_, int n_, int K_, std::vector<double> u_)
    : space(space_), n(n_), K(K_), u(std::move(u_)) {
    if (n < 2 || n > kMaxDimension) throw DomainError("surface dimension n must be in [2, 32]");
    if (K < 4) throw DomainError("grid needs at least four intervals");
    if (static_cast<int>(u.size()) != K + 1) throw DomainError("graph needs K+1 values");
}

MeridianSurface MeridianSurface::from_function(SpaceTag space, int n, int K, const std::function<double(double)>& f) {
    std::vector<double> u(K + 1);
    const double h = std::numbers::pi / K;
    for (int k = 0; k <= K; ++k) u[k] = f(k * h);
    return MeridianSurface(space, n, K, std::move(u));
}

double MeridianSurface::spacing() const { return std::numbers::pi / K; }
double MeridianSurface::theta(int k) const { return k * spacing(); }
double MeridianSurface::min_u() const { return *std::min_element(u.begin(), u.end()); }
double MeridianSurface::max_u() const { return *std::max_element(u.begin(), u.end()); }

MeridianSurface perturbed_surface(SpaceTag space, int n, int K, double c, double a, int m) {
    return MeridianSurface::from_function(space, n, K, [=](double th) { return c + a * std::cos(m * th); });
}

std::vector<double> PointGeometry::sorted_kappa() const {
    std::vector<double> k(n, kappa_rot);
    k[0] = kappa_mer;
    std::sort(k.begin(), k.end());
    return k;
}

std::vector<double> PointGeometry::sorted_F_i() const {
    std::vector<double> f(n, F_rot);
    if (kappa_mer <= kappa_rot)
        f[0] = F_mer;
    else
        f[n - 1] = F_mer;
    return f;
}

LorentzVector lift(const Vec3& r, int n) {
    LorentzVector x = LorentzVector::Zero(n + 2);
    x[0] = r[0];
    x[1] = r[1];
    x[2] = r[2];
    return x;
}

namespace {

struct Trig {
    double c, s;
};

// exact zeros on the axis so the pole points stay on it
Trig grid_trig_raw(int k, int K) {
    if (k == 0) return {1.0, 0.0};
    if (k == K) return {-1.0, 0.0};
    if (2 * k == K) return {0.0, 1.0};
    const double th = k * std::numbers::pi / K;
    return {std::cos(th), std::sin(th)};
}

Trig grid_trig(int k, int K) {
    thread_local int cached_K = -1;
    thread_local std::vector<Trig> table;
    if (K != cached_K) {
        table.resize(K + 1);
        for (int j = 0; j <= K; ++j) table[j] = grid_trig_raw(j, K);
        cached_K = K;
    }
    return table[k];
}

// fourth-order central stencils written as differences from the centre value
// so constant data gives exact zeros
inline double d1(double m2, double m1, double p1, double p2, double h) {
    return (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
}
inline double d2(double m2, double m1, double c, double p1, double p2, double h) {
    return (16.0 * ((p1 - c) + (m1 - c)) - ((p2 - c) + (m2 - c))) / (12.0 * h * h);
}

inline double d1_6(const double* f, double h) {
    return (45.0 * (f[4] - f[2]) - 9.0 * (f[5] - f[1]) + (f[6] - f[0])) / (60.0 * h);
}
inline double d2_6(const double* f, double h) {
    const double c = f[3];
    return (270.0 * ((f[4] - c) + (f[2] - c)) - 27.0 * ((f[5] - c) + (f[1] - c)) + 2.0 * ((f[6] - c) + (f[0] - c))) /
           (180.0 * h * h);
}

void fill_curvature_function(PointGeometry& pg, const CurvatureFunction& f) {
    const int n = pg.n;
    std::array<double, kMaxDimension> kb{}, gb{};
    kb[0] = pg.kappa_mer;
    for (int i = 1; i < n; ++i) kb[i] = pg.kappa_rot;
    const std::span<const double> k(kb.data(), n);
    pg.F = f.value_unchecked(k);
    f.gradient_unchecked(k, std::span<double>(gb.data(), n));
    pg.F_mer = gb[0];
    pg.F_rot = n > 1 ? gb[1] : 0.0;
    pg.sum_F_i = pg.F_mer + (n - 1) * pg.F_rot;
    pg.sum_F_i_kappa2 = pg.F_mer * pg.kappa_mer * pg.kappa_mer + (n - 1) * pg.F_rot * pg.kappa_rot * pg.kappa_rot;
}

// Shared tail of graph and curve geometry: normal, second fundamental form,
// principal curvatures, F. `v_graph` <= 0 means "derive v from the normal".
// `u_graph` is the chart value when known (NaN: recover it from x).
void finish_point(SpaceTag space, const Vec3& x, const Vec3& xt, const Vec3& xtt, bool on_axis, double v_graph,
                  double u_graph, int index, const CurvatureFunction* f, PointGeometry& pg) {
    pg.x = x;
    pg.x_theta = xt;
    pg.g_mer = quadratic_form(xt);
    if (!(pg.g_mer > 0.0)) {
        if (!std::isfinite(pg.g_mer)) throw GeometryError(GeometryFailure::NonFinite, index);
        throw GeometryError(GeometryFailure::NotSpacelike, index);
    }
    Vec3 w = lorentz_cross(x, xt);
    const double qw = quadratic_form(w);

    double cu, cos_angle = 1.0;
    if (space == SpaceTag::DeSitter) {
        if (!(qw < 0.0)) throw GeometryError(GeometryFailure::NotSpacelike, index);
        pg.nu = w / std::sqrt(-qw);
        if (pg.nu[0] > 0.0) pg.nu = -pg.nu;  // past directed
        pg.u = std::isnan(u_graph) ? std::asinh(x[0]) : u_graph;
        cu = std::sqrt(1.0 + x[0] * x[0]);
    } else {
        if (!(qw > 0.0)) throw GeometryError(GeometryFailure::NonFinite, index);
        pg.nu = w / std::sqrt(qw);
        pg.u = std::isnan(u_graph) ? std::acosh(std::max(1.0, x[0])) : u_graph;
        cu = x[0];
        // exterior: positive component along the outward radial geodesic direction
        const double rho = std::hypot(x[1], x[2]);
        const Vec3 radial(rho, cu * x[1] / rho, cu * x[2] / rho);
        cos_angle = lorentz_dot(pg.nu, radial);
        if (cos_angle < 0.0) {
            pg.nu = -pg.nu;
            cos_angle = -cos_angle;
        }
    }

    pg.h_mer = -lorentz_dot(xtt, pg.nu);
    pg.kappa_mer = pg.h_mer / pg.g_mer;
    if (on_axis) {
        pg.g_rot = 0.0;
        pg.h_rot = 0.0;
        pg.kappa_rot = pg.kappa_mer;
    } else {
        pg.g_rot = x[2] * x[2];
        pg.h_rot = x[2] * pg.nu[2];
        pg.kappa_rot = pg.nu[2] / x[2];
    }
    if (!std::isfinite(pg.kappa_mer) || !std::isfinite(pg.kappa_rot))
        throw GeometryError(GeometryFailure::NonFinite, index);
    if (!(pg.kappa_mer > 0.0) || !(pg.kappa_rot > 0.0)) throw GeometryError(GeometryFailure::ConvexityLost, index);
    pg.kappa_min = std::min(pg.kappa_mer, pg.kappa_rot);
    pg.kappa_max = std::max(pg.kappa_mer, pg.kappa_rot);
    pg.H_tilde = 1.0 / pg.kappa_mer + (pg.n - 1) / pg.kappa_rot;

    if (space == SpaceTag::DeSitter) {
        pg.chi_normal = -pg.nu[0];
        if (v_graph > 0.0) {
            pg.v = v_graph;
            pg.v_tilde = 1.0 / v_graph;
        } else {
            pg.v_tilde = pg.chi_normal / cu;
            pg.v = 1.0 / pg.v_tilde;
        }
    } else {
        pg.chi_normal = cu / cos_angle;
        if (v_graph > 0.0) {
            pg.v = v_graph;
            pg.v_tilde = 1.0 / v_graph;
        } else {
            pg.v = cos_angle;
            pg.v_tilde = 1.0 / cos_angle;
        }
    }
    pg.chi = pg.v_tilde * cu;

    if (f) fill_curvature_function(pg, *f);
}

}  // namespace

Vec3 embed_reduced(SpaceTag space, double theta, double u) {
    const double c = std::cos(theta), s = std::sin(theta);
    if (space == SpaceTag::DeSitter) return Vec3(std::sinh(u), std::cosh(u) * c, std::cosh(u) * s);
    return Vec3(std::cosh(u), std::sinh(u) * c, std::sinh(u) * s);
}

LorentzVector embed(const MeridianSurface& surface, int k) {
    if (k < 0 || k > surface.K) throw DomainError("grid index out of range");
    const Trig t = grid_trig(k, surface.K);
    const double u = surface.u[k];
    Vec3 r = surface.space == SpaceTag::DeSitter ? Vec3(std::sinh(u), std::cosh(u) * t.c, std::cosh(u) * t.s)
                                                 : Vec3(std::cosh(u), std::sinh(u) * t.c, std::sinh(u) * t.s);
    return lift(r, surface.n);
}

std::vector<double> graph_derivative(const MeridianSurface& s) {
    const int K = s.K;
    const double h = s.spacing();
    std::vector<double> out(K + 1);
    auto at = [&](int j) { return s.u[reflect_index(j, K)]; };
    for (int k = 0; k <= K; ++k) out[k] = d1(at(k - 2), at(k - 1), at(k + 1), at(k + 2), h);
    out[0] = 0.0;
    out[K] = 0.0;
    return out;
}

void compute_geometry(const MeridianSurface& s, const CurvatureFunction* f, std::vector<PointGeometry>& out) {
    if (f && f->dimension() != s.n) throw DomainError("curvature function dimension does not match surface");
    const int K = s.K;
    const double h = s.spacing();
    out.resize(K + 1);
    auto at = [&](int j) { return s.u[reflect_index(j, K)]; };

    for (int k = 0; k <= K; ++k) {
        const double u = s.u[k];
        const double um2 = at(k - 2), um1 = at(k - 1), up1 = at(k + 1), up2 = at(k + 2);
        const bool axis = (k == 0 || k == K);
        const double up = axis ? 0.0 : d1(um2, um1, up1, up2, h);
        const double upp = d2(um2, um1, u, up1, up2, h);
        const Trig t = grid_trig(k, K);
        const double sh = std::sinh(u), ch = std::sqrt(1.0 + sh * sh);
        if (!std::isfinite(ch) || !std::isfinite(upp)) throw GeometryError(GeometryFailure::NonFinite, k);

        PointGeometry& pg = out[k];
        pg.n = s.n;
        pg.theta = k * h;
        Vec3 x, xt, xtt;
        double v;
        if (s.space == SpaceTag::DeSitter) {
            const double v2 = 1.0 - up * up / (ch * ch);
            if (!(v2 > 0.0)) throw GeometryError(GeometryFailure::NotSpacelike, k);
            v = std::sqrt(v2);
            x = Vec3(sh, ch * t.c, ch * t.s);
            xt = Vec3(ch * up, sh * up * t.c - ch * t.s, sh * up * t.s + ch * t.c);
            xtt = Vec3(sh * up * up + ch * upp, ch * up * up * t.c + sh * upp * t.c - 2.0 * sh * up * t.s - ch * t.c,
                       ch * up * up * t.s + sh * upp * t.s + 2.0 * sh * up * t.c - ch * t.s);
        } else {
            if (!(u > 0.0)) throw GeometryError(GeometryFailure::NotInterior, k);
            v = 1.0 / std::sqrt(1.0 + up * up / (sh * sh));
            x = Vec3(ch, sh * t.c, sh * t.s);
            xt = Vec3(sh * up, ch * up * t.c - sh * t.s, ch * up * t.s + sh * t.c);
            xtt = Vec3(ch * up * up + sh * upp, sh * up * up * t.c + ch * upp * t.c - 2.0 * ch * up * t.s - sh * t.c,
                       sh * up * up * t.s + ch * upp * t.s + 2.0 * ch * up * t.c - sh * t.s);
        }
        finish_point(s.space, x, xt, xtt, axis, v, u, k, f, pg);
    }
}

std::vector<PointGeometry> compute_geometry(const MeridianSurface& surface, const CurvatureFunction& f) {
    std::vector<PointGeometry> out;
    compute_geometry(surface, &f, out);
    return out;
}

std::vector<PointGeometry> compute_frame(const MeridianSurface& surface) {
    std::vector<PointGeometry> out;
    compute_geometry(surface, nullptr, out);
    return out;
}

void compute_curve_geometry(SpaceTag space, int n, std::span<const Vec3> pts, const CurvatureFunction* f,
                            std::vector<PointGeometry>& out) {
    const int K = static_cast<int>(pts.size()) - 1;
    if (K < 6) throw DomainError("curve needs at least seven points");
    if (f && f->dimension() != n) throw DomainError("curvature function dimension does not match curve");
    const double h = std::numbers::pi / K;
    out.resize(K + 1);
    auto at = [&](int j) {
        Vec3 p = pts[reflect_index(j, K)];
        if (j < 0 || j > K) p[2] = -p[2];
        return p;
    };
    for (int k = 0; k <= K; ++k) {
        Vec3 xt, xtt;
        for (int i = 0; i < 3; ++i) {
            double f[7];
            for (int j = 0; j < 7; ++j) f[j] = at(k + j - 3)[i];
            xt[i] = d1_6(f, h);
            xtt[i] = d2_6(f, h);
        }
        const bool axis = (k == 0 || k == K);
        PointGeometry& pg = out[k];
        pg.n = n;
        pg.theta = std::atan2(pts[k][2], pts[k][1]);
        finish_point(space, pts[k], xt, xtt, axis, -1.0, std::numeric_limits<double>::quiet_NaN(), k, f, pg);
    }
}

const std::vector<std::string>& diagnostics_columns() {
    static const std::vector<std::string> cols = {
        "t",     "dt",    "min_u",       "max_u",   "osc_u",   "kappa_min", "kappa_max", "pinch_ratio",
        "F_min", "F_max", "v_tilde_max", "chi_min", "chi_max", "w_pinch",   "w_F_chi"};
    return cols;
}

std::vector<double> diagnostics_values(const DiagnosticsRow& r) {
    return {r.t,     r.dt,    r.min_u,       r.max_u,   r.osc_u,   r.kappa_min, r.kappa_max, r.pinch_ratio,
            r.F_min, r.F_max, r.v_tilde_max, r.chi_min, r.chi_max, r.w_pinch,   r.w_F_chi};
}

DiagnosticsRow diagnostics(std::span<const PointGeometry> g, double t, int n) {
    DiagnosticsRow r;
    r.t = t;
    constexpr double inf = std::numeric_limits<double>::infinity();
    r.min_u = inf;
    r.max_u = -inf;
    r.kappa_min = inf;
    r.kappa_max = -inf;
    r.pinch_ratio = -inf;
    r.F_min = inf;
    r.F_max = -inf;
    r.v_tilde_max = -inf;
    r.chi_min = inf;
    r.chi_max = -inf;
    double sup_pinch = -inf, sup_fchi = -inf;
    for (const PointGeometry& p : g) {
        r.min_u = std::min(r.min_u, p.u);
        r.max_u = std::max(r.max_u, p.u);
        r.kappa_min = std::min(r.kappa_min, p.kappa_min);
        r.kappa_max = std::max(r.kappa_max, p.kappa_max);
        r.pinch_ratio = std::max(r.pinch_ratio, p.pinch_ratio());
        r.F_min = std::min(r.F_min, p.F);
        r.F_max = std::max(r.F_max, p.F);
        r.v_tilde_max = std::max(r.v_tilde_max, p.v_tilde);
        r.chi_min = std::min(r.chi_min, p.chi);
        r.chi_max = std::max(r.chi_max, p.chi);
        sup_pinch = std::max(sup_pinch, std::log(p.F) + std::log(p.H_tilde));
        sup_fchi = std::max(sup_fchi, std::log(p.F) + std::log(p.chi));
    }
    r.osc_u = r.max_u - r.min_u;
    r.w_pinch = sup_pinch - 2.0 * n * t;
    r.w_F_chi = sup_fchi;
    return r;
}

void write_snapshot(std::ostream& os, std::span<const PointGeometry> g) {
    std::ostringstream line;
    line << std::setprecision(17);
    for (const PointGeometry& p : g) {
        line.str("");
        line << p.theta << ' ' << p.u << ' ' << p.kappa_min << ' ' << p.kappa_max << ' ' << p.v << ' ' << p.chi
             << '\n';
        os << line.str();
    }
}

MeridianSurface read_snapshot(std::istream& is, SpaceTag space, int n) {
    std::vector<double> theta, u;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double th, val;
        if (!(ls >> th >> val)) throw DomainError("malformed snapshot line: " + line);
        theta.push_back(th);
        u.push_back(val);
    }
    if (u.size() < 5) throw DomainError("snapshot has too few grid points");
    const int K = static_cast<int>(u.size()) - 1;
    const double h = std::numbers::pi / K;
    for (int k = 0; k <= K; ++k)
        if (std::abs(theta[k] - k * h) > 1e-9) throw DomainError("snapshot latitudes are not the uniform grid");
    return MeridianSurface(space, n, K, std::move(u));
}

}  // namespace dualflow
