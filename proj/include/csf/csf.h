/* Curve shortening flow simulator: C interface to the shared library.
 *
 * Handles are opaque; every function that can fail returns a csf_status and
 * leaves a human-readable detail retrievable per thread via
 * csf_last_error_message().  Arrays are row-major doubles sized by the model
 * dimension and curve node count.
 */
#ifndef CSF_H
#define CSF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CSF_API __declspec(dllexport)
#else
#define CSF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csf_status {
    CSF_OK = 0,
    CSF_ERR_INVALID_ARGUMENT = 1,
    CSF_ERR_CONFIG = 2,
    CSF_ERR_POLE_PROXIMITY = 3,
    CSF_ERR_DEGENERATE_EDGE = 4,
    CSF_ERR_NONFINITE = 5,
    CSF_ERR_NONPOSITIVE_OMEGA = 6,
    CSF_ERR_SHAPE_MISMATCH = 7,
    CSF_ERR_INSUFFICIENT_SAMPLES = 8,
    CSF_ERR_IO = 9,
    CSF_ERR_INTERNAL = 10
} csf_status;

typedef enum csf_termination {
    CSF_TERM_COMPLETED = 0,
    CSF_TERM_BLOWUP = 1,
    CSF_TERM_ERROR = 2
} csf_termination;

typedef struct csf_model csf_model;
typedef struct csf_curve csf_curve;
typedef struct csf_flow csf_flow;

CSF_API const char *csf_version(void);
CSF_API const char *csf_status_string(csf_status status);
/* Thread-local detail for the most recent failure on this thread. */
CSF_API const char *csf_last_error_message(void);
/* 0 = error, 1 = info, 2 = debug; the CSF_LOG environment variable
 * (error|info|debug) sets the initial level. */
CSF_API void csf_set_log_level(int level);

/* ---- ambient models ---------------------------------------------------- */

CSF_API csf_status csf_model_create_euclidean(int dim, csf_model **out);
CSF_API csf_status csf_model_create_flat_torus(const double *periods, int dim,
                                               csf_model **out);
CSF_API csf_status csf_model_create_cylinder_sphere(int sphere_dim, double sphere_radius,
                                                    double pole_margin, csf_model **out);
CSF_API void csf_model_free(csf_model *model);

CSF_API int csf_model_dim(const csf_model *model);
/* 0 for non-periodic coordinates. */
CSF_API double csf_model_period(const csf_model *model, int coordinate);
CSF_API double csf_model_curvature_bound(const csf_model *model);

CSF_API csf_status csf_model_metric(const csf_model *model, const double *point,
                                    double *out_matrix /* dim*dim */);
CSF_API csf_status csf_model_christoffel(const csf_model *model, const double *point,
                                         double *out /* dim^3, [k][i][j] */);
CSF_API csf_status csf_model_riemann(const csf_model *model, const double *point,
                                     const double *x, const double *y, const double *z,
                                     const double *w, double *out_value);

CSF_API int csf_model_parallel_form_count(const csf_model *model);
CSF_API csf_status csf_model_parallel_form(const csf_model *model, int index,
                                           const double *point, double *out_components,
                                           char *name_buffer, size_t name_buffer_size);
/* max_{i,j} |d_i w_j - Gamma^k_{ij} w_k| with central differences of step h. */
CSF_API csf_status csf_model_check_parallel(const csf_model *model, int form_index,
                                            const double *point, double h,
                                            double *out_residual);

/* ---- curves and their geometry ----------------------------------------- */

CSF_API csf_status csf_curve_create(const csf_model *model, const double *coords,
                                    int node_count, csf_curve **out);
CSF_API csf_status csf_curve_from_config(const csf_model *model,
                                         const char *initial_curve_json, csf_curve **out);
CSF_API void csf_curve_free(csf_curve *curve);
CSF_API int csf_curve_node_count(const csf_curve *curve);
CSF_API csf_status csf_curve_coords(const csf_curve *curve, double *out /* N*dim */);
CSF_API csf_status csf_curve_resample_uniform(const csf_curve *curve, csf_curve **out);
CSF_API csf_status csf_curve_write_csv(const csf_curve *curve, const char *path);
CSF_API csf_status csf_curve_read_csv(const csf_model *model, const char *path,
                                      csf_curve **out);

/* Derived per-node quantities.  Any output pointer may be NULL; a_norms holds
 * (m_max+1) rows of N entries: |grad^m A|^2 for m = 0..m_max. */
CSF_API csf_status csf_curve_geometry(const csf_curve *curve, int m_max,
                                      double *out_length, double *out_edge_lengths,
                                      double *out_tangents, double *out_curvature,
                                      double *out_a_norms);
CSF_API csf_status csf_curve_integrate_scalar(const csf_curve *curve, const double *field,
                                              double *out_value);
/* Omega(T) extrema for a declared parallel form. */
CSF_API csf_status csf_curve_omega_range(const csf_curve *curve, int form_index,
                                         double *out_min, double *out_max);

/* ---- flow -------------------------------------------------------------- */

/* flow_config_json carries the "flow" block fields, e.g.
 * {"t_end":1.0,"cfl_factor":0.5,"scheme":"rk2","sample_every":0.1}. */
CSF_API csf_status csf_flow_create(const csf_curve *initial, const char *flow_config_json,
                                   csf_flow **out);
CSF_API void csf_flow_free(csf_flow *flow);
CSF_API double csf_flow_time(const csf_flow *flow);
CSF_API int64_t csf_flow_step_count(const csf_flow *flow);
CSF_API csf_status csf_flow_stable_dt(const csf_flow *flow, double *out_dt);
CSF_API csf_status csf_flow_step(csf_flow *flow);
CSF_API csf_status csf_flow_advance(csf_flow *flow, csf_termination *out_termination);
CSF_API csf_status csf_flow_current_curve(const csf_flow *flow, csf_curve **out);
CSF_API csf_status csf_flow_max_a2(const csf_flow *flow, double *out_value);

/* ---- experiments -------------------------------------------------------- */

/* Returns the process exit code contract:
 *   0 completed, all enabled checks passed
 *   2 completed, some enabled check failed
 *   3 blow-up termination
 *   4 runtime error (pole proximity, degenerate edge, non-finite, I/O)
 *   5 configuration error
 * out_dir may be NULL to use the directory from the configuration. */
CSF_API int csf_run_experiment_file(const char *config_path, const char *out_dir);
CSF_API int csf_run_experiment_text(const char *config_json, const char *out_dir);
/* Same exit-code contract, 0 when the configuration is valid. */
CSF_API int csf_validate_config_file(const char *config_path);
CSF_API int csf_validate_config_text(const char *config_json);

#ifdef __cplusplus
}
#endif

#endif /* CSF_H */
