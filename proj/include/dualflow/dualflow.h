/* C interface of the dualflow library. All handles are opaque; every call
 * that can fail returns a dualflow_status and leaves a message retrievable
 * with dualflow_last_error() on the calling thread. */
#ifndef DUALFLOW_H
#define DUALFLOW_H

#include <stddef.h>

#if defined(DUALFLOW_BUILDING_LIBRARY)
#define DUALFLOW_API __attribute__((visibility("default")))
#else
#define DUALFLOW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2..4 double as process exit codes. */
typedef enum dualflow_status {
    DUALFLOW_OK = 0,
    DUALFLOW_ERR_ARGUMENT = 1,
    DUALFLOW_ERR_CONFIG = 2,
    DUALFLOW_ERR_STEP_FAILURE = 3,
    DUALFLOW_ERR_IO = 4,
    DUALFLOW_ERR_DOMAIN = 5,
    DUALFLOW_ERR_GEOMETRY = 6,
    DUALFLOW_ERR_INTERNAL = 7
} dualflow_status;

typedef enum dualflow_space { DUALFLOW_HYPERBOLIC = 0, DUALFLOW_DESITTER = 1 } dualflow_space;

typedef struct dualflow_config dualflow_config;
typedef struct dualflow_surface dualflow_surface;

DUALFLOW_API const char* dualflow_version(void);

/* Message of the last failed call on this thread ("" if none). For config
 * errors this lists every violation, one per line. */
DUALFLOW_API const char* dualflow_last_error(void);

/* ---- configurations ---- */

DUALFLOW_API dualflow_status dualflow_config_parse(const char* text, dualflow_config** out);
DUALFLOW_API dualflow_status dualflow_config_load(const char* path, dualflow_config** out);
DUALFLOW_API void dualflow_config_free(dualflow_config* config);

DUALFLOW_API dualflow_status dualflow_config_set_output(dualflow_config* config, const char* directory);
DUALFLOW_API const char* dualflow_config_preset(const dualflow_config* config);

/* 1 for checking presets (property_suite, duality_check, residual_check), 0 for flows. */
DUALFLOW_API int dualflow_config_is_suite(const dualflow_config* config);

/* Runs the preset and writes its artifacts. *exit_code receives 0, 2, 3 or 4.
 * With verbose != 0 progress lines are printed to stdout. */
DUALFLOW_API dualflow_status dualflow_execute(const dualflow_config* config, int verbose, int* exit_code);

/* ---- surfaces ---- */

/* u(theta) = c + a cos(m theta) on K+1 latitudes. */
DUALFLOW_API dualflow_status dualflow_surface_perturbed(dualflow_space space, int n, int K, double c, double a, int m,
                                                        dualflow_surface** out);
DUALFLOW_API dualflow_status dualflow_surface_from_values(dualflow_space space, int n, const double* u, size_t count,
                                                          dualflow_surface** out);
DUALFLOW_API void dualflow_surface_free(dualflow_surface* surface);

DUALFLOW_API size_t dualflow_surface_size(const dualflow_surface* surface);
DUALFLOW_API dualflow_status dualflow_surface_values(const dualflow_surface* surface, double* out, size_t count);

/* Extremes of the principal curvatures and of F (named "pm:1", "pm:2", ...). */
DUALFLOW_API dualflow_status dualflow_surface_curvature_range(const dualflow_surface* surface,
                                                              const char* curvature_function, double* kappa_min,
                                                              double* kappa_max, double* F_min, double* F_max);

/* Gauss-map duals: H -> N- and N- -> H, resampled on the same grid. */
DUALFLOW_API dualflow_status dualflow_dualize(const dualflow_surface* surface, dualflow_surface** out);
DUALFLOW_API dualflow_status dualflow_dualize_inverse(const dualflow_surface* surface, dualflow_surface** out);

/* max |kappa_i kappa~_i - 1| between a surface in H and one in N. */
DUALFLOW_API dualflow_status dualflow_duality_residual(const dualflow_surface* in_h, const dualflow_surface* in_n,
                                                       double* kappa_product_residual, double* h_identity_residual);

/* ---- scalar helpers ---- */

DUALFLOW_API dualflow_status dualflow_curvature_value(const char* curvature_function, const double* kappa, int n,
                                                      double* out);
DUALFLOW_API dualflow_status dualflow_spherical_oracle(double u0, double t, double* out);

#ifdef __cplusplus
}
#endif

#endif
