#include "dualflow/dualflow.h"

#include <iostream>
#include <new>
#include <string>

#include "dualflow/config.hpp"
#include "dualflow/duality.hpp"
#include "dualflow/error.hpp"
#include "dualflow/execute.hpp"
#include "dualflow/flow.hpp"

struct dualflow_config {
    dualflow::RunConfig cfg;
};

struct dualflow_surface {
    dualflow::MeridianSurface s;
};

namespace {

thread_local std::string g_last_error;

dualflow_status fail(dualflow_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

// Maps core exceptions to status codes; `body` returns normally on success.
template <class Body>
dualflow_status guarded(Body&& body) {
    try {
        g_last_error.clear();
        body();
        return DUALFLOW_OK;
    } catch (const dualflow::ConfigError& e) {
        return fail(DUALFLOW_ERR_CONFIG, e.what());
    } catch (const dualflow::GeometryError& e) {
        return fail(DUALFLOW_ERR_GEOMETRY, e.what());
    } catch (const dualflow::StepFailure& e) {
        return fail(DUALFLOW_ERR_STEP_FAILURE, e.what());
    } catch (const dualflow::IoError& e) {
        return fail(DUALFLOW_ERR_IO, e.what());
    } catch (const dualflow::DomainError& e) {
        return fail(DUALFLOW_ERR_DOMAIN, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DUALFLOW_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DUALFLOW_ERR_INTERNAL, e.what());
    }
}

dualflow::SpaceTag to_space(dualflow_space s) {
    return s == DUALFLOW_HYPERBOLIC ? dualflow::SpaceTag::Hyperbolic : dualflow::SpaceTag::DeSitter;
}

}  // namespace

extern "C" {

const char* dualflow_version(void) { return "0.1.0"; }

const char* dualflow_last_error(void) { return g_last_error.c_str(); }

dualflow_status dualflow_config_parse(const char* text, dualflow_config** out) {
    if (!text || !out) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new dualflow_config{dualflow::parse_config(text)}; });
}

dualflow_status dualflow_config_load(const char* path, dualflow_config** out) {
    if (!path || !out) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new dualflow_config{dualflow::load_config(path)}; });
}

void dualflow_config_free(dualflow_config* config) { delete config; }

dualflow_status dualflow_config_set_output(dualflow_config* config, const char* directory) {
    if (!config || !directory || !*directory) return fail(DUALFLOW_ERR_ARGUMENT, "null or empty argument");
    config->cfg.output = directory;
    return DUALFLOW_OK;
}

const char* dualflow_config_preset(const dualflow_config* config) {
    return config ? dualflow::to_string(config->cfg.preset) : "";
}

int dualflow_config_is_suite(const dualflow_config* config) {
    return config && dualflow::is_suite_preset(config->cfg.preset) ? 1 : 0;
}

dualflow_status dualflow_execute(const dualflow_config* config, int verbose, int* exit_code) {
    if (!config || !exit_code) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        *exit_code = dualflow::execute(config->cfg, verbose ? &std::cout : nullptr);
        if (*exit_code == dualflow::kExitIo) g_last_error = "I/O failure while writing artifacts";
        if (*exit_code == dualflow::kExitStepFailure) g_last_error = "step failure";
    });
}

dualflow_status dualflow_surface_perturbed(dualflow_space space, int n, int K, double c, double a, int m,
                                           dualflow_surface** out) {
    if (!out) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new dualflow_surface{dualflow::perturbed_surface(to_space(space), n, K, c, a, m)}; });
}

dualflow_status dualflow_surface_from_values(dualflow_space space, int n, const double* u, size_t count,
                                             dualflow_surface** out) {
    if (!u || !out || count < 2) return fail(DUALFLOW_ERR_ARGUMENT, "null argument or too few values");
    *out = nullptr;
    return guarded([&] {
        *out = new dualflow_surface{dualflow::MeridianSurface(to_space(space), n, static_cast<int>(count) - 1,
                                                              std::vector<double>(u, u + count))};
    });
}

void dualflow_surface_free(dualflow_surface* surface) { delete surface; }

size_t dualflow_surface_size(const dualflow_surface* surface) { return surface ? surface->s.u.size() : 0; }

dualflow_status dualflow_surface_values(const dualflow_surface* surface, double* out, size_t count) {
    if (!surface || !out) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    if (count < surface->s.u.size()) return fail(DUALFLOW_ERR_ARGUMENT, "output buffer too small");
    std::copy(surface->s.u.begin(), surface->s.u.end(), out);
    return DUALFLOW_OK;
}

dualflow_status dualflow_surface_curvature_range(const dualflow_surface* surface, const char* curvature_function,
                                                 double* kappa_min, double* kappa_max, double* F_min, double* F_max) {
    if (!surface || !curvature_function) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const auto f = dualflow::parse_curvature_function(curvature_function, surface->s.n);
        const auto g = dualflow::compute_geometry(surface->s, f);
        const auto row = dualflow::diagnostics(g, 0.0, surface->s.n);
        if (kappa_min) *kappa_min = row.kappa_min;
        if (kappa_max) *kappa_max = row.kappa_max;
        if (F_min) *F_min = row.F_min;
        if (F_max) *F_max = row.F_max;
    });
}

dualflow_status dualflow_dualize(const dualflow_surface* surface, dualflow_surface** out) {
    if (!surface || !out) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new dualflow_surface{dualflow::dualize(surface->s)}; });
}

dualflow_status dualflow_dualize_inverse(const dualflow_surface* surface, dualflow_surface** out) {
    if (!surface || !out) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new dualflow_surface{dualflow::dualize_inverse(surface->s)}; });
}

dualflow_status dualflow_duality_residual(const dualflow_surface* in_h, const dualflow_surface* in_n,
                                          double* kappa_product_residual, double* h_identity_residual) {
    if (!in_h || !in_n) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = dualflow::duality_report(in_h->s, in_n->s);
        if (kappa_product_residual) *kappa_product_residual = r.kappa_product_residual;
        if (h_identity_residual) *h_identity_residual = r.h_identity_residual;
    });
}

dualflow_status dualflow_curvature_value(const char* curvature_function, const double* kappa, int n, double* out) {
    if (!curvature_function || !kappa || !out || n < 1) return fail(DUALFLOW_ERR_ARGUMENT, "invalid argument");
    return guarded([&] {
        const auto f = dualflow::parse_curvature_function(curvature_function, n);
        *out = f.value(std::span<const double>(kappa, static_cast<size_t>(n)));
    });
}

dualflow_status dualflow_spherical_oracle(double u0, double t, double* out) {
    if (!out) return fail(DUALFLOW_ERR_ARGUMENT, "null argument");
    return guarded([&] { *out = dualflow::spherical_oracle(u0, t); });
}

}  // extern "C"
