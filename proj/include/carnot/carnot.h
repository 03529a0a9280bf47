/*
 * carnot.h - C interface to the Carnot group normal-curve laboratory.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function. Functions return a carnot_status; on failure the
 * message is available from carnot_last_error() on the calling thread.
 *
 * Vectors are flat double arrays in the adapted basis (length n = algebra
 * dimension, or m1 = dim V_1 for controls). Matrices are n*n, row-major.
 * Group elements use exponential coordinates of the first kind.
 */
#ifndef CARNOT_CARNOT_H
#define CARNOT_CARNOT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CARNOT_BUILDING_LIBRARY)
#    define CARNOT_API __declspec(dllexport)
#  else
#    define CARNOT_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && (__GNUC__ >= 4)
#  define CARNOT_API __attribute__((visibility("default")))
#else
#  define CARNOT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum carnot_status {
  CARNOT_OK = 0,
  CARNOT_ERR_INPUT = 1,       /* malformed argument, dimension mismatch, bad file */
  CARNOT_ERR_INTEGRATION = 2, /* non-finite state during integration */
  CARNOT_ERR_IO = 3,          /* output file could not be written */
  CARNOT_ERR_INTERNAL = 4
} carnot_status;

typedef enum carnot_run_status {
  CARNOT_RUN_OK = 0,
  CARNOT_RUN_CONSTANT = 1,
  CARNOT_RUN_NO_ESCAPE_REGIME = 2,
  CARNOT_RUN_OVERFLOW = 3
} carnot_run_status;

typedef struct carnot_algebra carnot_algebra;
typedef struct carnot_validation carnot_validation;
typedef struct carnot_group carnot_group;
typedef struct carnot_norm carnot_norm;
typedef struct carnot_trace carnot_trace;
typedef struct carnot_config carnot_config;
typedef struct carnot_escape_report carnot_escape_report;
typedef struct carnot_growth_report carnot_growth_report;
typedef struct carnot_pmp_report carnot_pmp_report;
typedef struct carnot_filiform_report carnot_filiform_report;

CARNOT_API const char* carnot_version(void);
/* Message of the last failed call on this thread ("" if none). */
CARNOT_API const char* carnot_last_error(void);

/* ---- algebra ------------------------------------------------------------ */

/* heisenberg, filiform2..filiform6, free-step2-rank3 */
CARNOT_API carnot_status carnot_algebra_builtin(const char* name, carnot_algebra** out);
CARNOT_API carnot_status carnot_algebra_from_file(const char* path, carnot_algebra** out);
CARNOT_API carnot_status carnot_algebra_from_json(const char* text, carnot_algebra** out);
/* A built-in name, or else a definition file path. */
CARNOT_API carnot_status carnot_algebra_resolve(const char* name_or_path, carnot_algebra** out);
/* constants[(i*n + j)*n + k] = c_ij^k, 0-based; count must be n^3. */
CARNOT_API carnot_status carnot_algebra_from_constants(const int* strata, size_t strata_count,
                                                       const double* constants, size_t count,
                                                       carnot_algebra** out);
CARNOT_API void carnot_algebra_free(carnot_algebra* algebra);

CARNOT_API int carnot_algebra_dim(const carnot_algebra* algebra);
CARNOT_API int carnot_algebra_step(const carnot_algebra* algebra);
CARNOT_API int carnot_algebra_horizontal_dim(const carnot_algebra* algebra);
/* Writes the n degrees d_i. */
CARNOT_API carnot_status carnot_algebra_degrees(const carnot_algebra* algebra, int* out);
CARNOT_API const char* carnot_algebra_name(const carnot_algebra* algebra);

CARNOT_API carnot_status carnot_algebra_bracket(const carnot_algebra* algebra, const double* x,
                                                const double* y, double* out);
CARNOT_API carnot_status carnot_algebra_adjoint_operator(const carnot_algebra* algebra,
                                                         const double* x, double* out);

CARNOT_API carnot_status carnot_algebra_validate(const carnot_algebra* algebra, double tol,
                                                 carnot_validation** out);
CARNOT_API void carnot_validation_free(carnot_validation* report);
CARNOT_API size_t carnot_validation_count(const carnot_validation* report);
CARNOT_API int carnot_validation_all_passed(const carnot_validation* report);
/* triple receives the first counterexample (1-based) or zeros. Strings stay
 * valid until the report is freed. */
CARNOT_API carnot_status carnot_validation_check(const carnot_validation* report, size_t index,
                                                 const char** name, int* passed, int triple[3],
                                                 const char** detail);

/* ---- group -------------------------------------------------------------- */

CARNOT_API carnot_status carnot_group_create(const carnot_algebra* algebra, carnot_group** out);
CARNOT_API void carnot_group_free(carnot_group* group);
CARNOT_API int carnot_group_dim(const carnot_group* group);
CARNOT_API int carnot_group_step(const carnot_group* group);

CARNOT_API carnot_status carnot_group_multiply(const carnot_group* group, const double* g,
                                               const double* h, double* out);
CARNOT_API carnot_status carnot_group_inverse(const carnot_group* group, const double* g, double* out);
CARNOT_API carnot_status carnot_group_dilate(const carnot_group* group, double tau, const double* g,
                                             double* out);
CARNOT_API carnot_status carnot_group_adjoint(const carnot_group* group, const double* g, double* out);
CARNOT_API carnot_status carnot_group_left_jacobian(const carnot_group* group, const double* g,
                                                    double* out);
CARNOT_API carnot_status carnot_group_right_jacobian(const carnot_group* group, const double* g,
                                                     double* out);
CARNOT_API carnot_status carnot_group_dilation_field(const carnot_group* group, const double* g,
                                                     double* out);
CARNOT_API carnot_status carnot_group_dilation_coefficients(const carnot_group* group,
                                                            const double* g, double* out);
CARNOT_API carnot_status carnot_group_quasinorm(const carnot_group* group, const double* g,
                                                double* out);
/* N(lambda) = sum |lambda_i| */
CARNOT_API double carnot_covector_norm(const double* lambda, size_t n);
/* out = alpha * lambda; alpha must be positive. */
CARNOT_API carnot_status carnot_covector_rescale(const double* lambda, size_t n, double alpha,
                                                 double* out);
/* count covectors of dimension n, uniform on N = 1, written row by row. */
CARNOT_API carnot_status carnot_sample_unit_covectors(int n, int count, uint64_t seed, double* out);

/* ---- norms and controls ------------------------------------------------- */

/* kind: "euclidean", "l1", "linfty" or "polyhedral". Facets (polyhedral only)
 * are facet_count rows of m1 entries. */
CARNOT_API carnot_status carnot_norm_create(const char* kind, int m1, const double* facets,
                                            size_t facet_count, carnot_norm** out);
CARNOT_API void carnot_norm_free(carnot_norm* norm);
CARNOT_API carnot_status carnot_norm_value(const carnot_norm* norm, const double* v, double* out);
CARNOT_API carnot_status carnot_norm_dual(const carnot_norm* norm, const double* a, double* out);
CARNOT_API carnot_status carnot_energy(const carnot_norm* norm, const double* v, double* out);
CARNOT_API carnot_status carnot_in_subdifferential(const carnot_norm* norm, const double* a,
                                                   const double* v, double tol, int* out);
/* u (length m1) with (lambda o Ad_g)|V_1 in the sub-differential of E at u. */
CARNOT_API carnot_status carnot_extract_control(const carnot_group* group, const carnot_norm* norm,
                                                const double* lambda, const double* g, double* u);

/* ---- integration -------------------------------------------------------- */

CARNOT_API carnot_status carnot_integrate_normal(const carnot_group* group, const carnot_norm* norm,
                                                 const double* lambda, const double* g0,
                                                 double horizon, double step, carnot_trace** out);
CARNOT_API void carnot_trace_free(carnot_trace* trace);
CARNOT_API size_t carnot_trace_size(const carnot_trace* trace);
CARNOT_API double carnot_trace_step(const carnot_trace* trace);
/* Any of t, g (n), u (m1), local_error may be NULL. local_error is 0 at the
 * last sample. */
CARNOT_API carnot_status carnot_trace_sample(const carnot_trace* trace, size_t k, double* t,
                                             double* g, double* u, double* local_error);
CARNOT_API carnot_status carnot_trace_pmp_residual(const carnot_group* group, const carnot_norm* norm,
                                                   const double* lambda, const carnot_trace* trace,
                                                   double* out);
/* header t,g_1..g_n,u_1..u_m1,quasinorm,speed */
CARNOT_API carnot_status carnot_trace_write_csv(const carnot_trace* trace, const char* path,
                                                size_t stride);

/* controls: nodes rows of m1 values on a uniform grid of [0, 1]. */
CARNOT_API carnot_status carnot_end_point(const carnot_group* group, const double* controls,
                                          size_t nodes, const double* g0, double max_step,
                                          double* out);
CARNOT_API carnot_status carnot_end_point_directional(const carnot_group* group,
                                                      const double* controls,
                                                      const double* direction, size_t nodes,
                                                      const double* g0, double max_step,
                                                      double* out);

/* ---- experiments -------------------------------------------------------- */

CARNOT_API carnot_status carnot_config_create(carnot_config** out);
CARNOT_API carnot_status carnot_config_from_file(const char* path, carnot_config** out);
CARNOT_API carnot_status carnot_config_from_json(const char* text, carnot_config** out);
CARNOT_API void carnot_config_free(carnot_config* config);
CARNOT_API carnot_status carnot_config_set_algebra(carnot_config* config, const char* name_or_path);
CARNOT_API carnot_status carnot_config_set_norm(carnot_config* config, const char* kind,
                                                const double* facets, size_t facet_count, int m1);
CARNOT_API carnot_status carnot_config_set_covectors(carnot_config* config, const double* covectors,
                                                     size_t count, int n);
CARNOT_API carnot_status carnot_config_set_sampling(carnot_config* config, int count, uint64_t seed);
/* Sets or clears the sample count while keeping the seed. */
CARNOT_API carnot_status carnot_config_set_sample_count(carnot_config* config, int count);
CARNOT_API carnot_status carnot_config_set_seed(carnot_config* config, uint64_t seed);
CARNOT_API int carnot_config_has_sampling(const carnot_config* config);
CARNOT_API carnot_status carnot_config_set_horizon(carnot_config* config, double horizon);
CARNOT_API carnot_status carnot_config_set_step(carnot_config* config, double step);
CARNOT_API carnot_status carnot_config_set_sample_dt(carnot_config* config, double dt);
CARNOT_API carnot_status carnot_config_set_threads(carnot_config* config, int threads);
CARNOT_API carnot_status carnot_config_set_out_dir(carnot_config* config, const char* dir);
CARNOT_API const char* carnot_config_out_dir(const carnot_config* config);
CARNOT_API const char* carnot_config_algebra(const carnot_config* config);
CARNOT_API double carnot_config_horizon(const carnot_config* config);
CARNOT_API double carnot_config_step(const carnot_config* config);
/* The configured norm on a first stratum of dimension m1. */
CARNOT_API carnot_status carnot_config_make_norm(const carnot_config* config, int m1, carnot_norm** out);
/* Number of covectors the config resolves to (sampled or explicit). */
CARNOT_API carnot_status carnot_config_covector_count(const carnot_config* config, size_t* out);
/* Writes the resolved covectors for a group of dimension n, row by row. */
CARNOT_API carnot_status carnot_config_covectors(const carnot_config* config, int n, double* out);

typedef struct carnot_escape_run {
  int index;
  int status; /* carnot_run_status */
  double covector_norm;
  int has_slope;
  double slope;
  size_t fit_points;
  int has_c_emp;
  double c_emp;
  int has_escape_time;
  double escape_time;
  int has_return_ratio;
  double min_return_ratio;
  double d_max;
} carnot_escape_run;

typedef struct carnot_escape_summary {
  int step;
  double horizon;
  size_t runs;
  size_t fitted;
  int has_min_slope;
  double min_slope;
  double median_slope;
  int has_scaled_constant;
  double min_scaled_constant;
  double slope_floor;
  int slopes_pass;
  int no_return_pass;
} carnot_escape_summary;

CARNOT_API carnot_status carnot_run_escape(const carnot_config* config, carnot_escape_report** out);
CARNOT_API void carnot_escape_report_free(carnot_escape_report* report);
CARNOT_API carnot_status carnot_escape_summary_get(const carnot_escape_report* report,
                                                   carnot_escape_summary* out);
CARNOT_API carnot_status carnot_escape_run_get(const carnot_escape_report* report, size_t index,
                                               carnot_escape_run* out);
/* cov_idx,t,D,bound_rhs */
CARNOT_API carnot_status carnot_escape_write_csv(const carnot_escape_report* report, const char* path);
CARNOT_API carnot_status carnot_escape_write_summary_csv(const carnot_escape_report* report,
                                                         const char* path);

CARNOT_API carnot_status carnot_run_growth_bound(const carnot_config* config,
                                                 carnot_growth_report** out);
CARNOT_API void carnot_growth_report_free(carnot_growth_report* report);
CARNOT_API size_t carnot_growth_report_count(const carnot_growth_report* report);
CARNOT_API double carnot_growth_proxy_constant(const carnot_growth_report* report);
CARNOT_API int carnot_growth_all_finite(const carnot_growth_report* report);
CARNOT_API carnot_status carnot_growth_run_get(const carnot_growth_report* report, size_t index,
                                               int* status, double* sup_ratio);
/* cov_idx,t,ratio */
CARNOT_API carnot_status carnot_growth_write_csv(const carnot_growth_report* report, const char* path);

CARNOT_API carnot_status carnot_run_pmp_check(const carnot_config* config, carnot_pmp_report** out);
CARNOT_API void carnot_pmp_report_free(carnot_pmp_report* report);
CARNOT_API size_t carnot_pmp_report_count(const carnot_pmp_report* report);
CARNOT_API double carnot_pmp_max_residual(const carnot_pmp_report* report);
CARNOT_API int carnot_pmp_passed(const carnot_pmp_report* report);
CARNOT_API carnot_status carnot_pmp_run_get(const carnot_pmp_report* report, size_t index,
                                            int* status, double* residual);
/* cov_idx,N,status,lhs,rhs,residual */
CARNOT_API carnot_status carnot_pmp_write_csv(const carnot_pmp_report* report, const char* path);

typedef struct carnot_heisenberg_result {
  int winding;
  double step;
  double closed_end[3];
  double integrated_end[3];
  double max_deviation;
  double end_error;
  double closed_speed_deviation;
  double trace_speed_deviation;
  double pmp_residual;
  int passed;
} carnot_heisenberg_result;

CARNOT_API carnot_status carnot_example_heisenberg(int winding, double step,
                                                   carnot_heisenberg_result* out);
/* Closed-form lift of the circle of radius 1/(2 pi N) at time t. */
CARNOT_API carnot_status carnot_heisenberg_circle_point(int winding, double t, double out[3]);

typedef struct carnot_filiform_options {
  uint64_t seed;
  double horizon;
  double step;
  double check_horizon;
  int scan_count;
  double sample_dt;
} carnot_filiform_options;

/* Fills the defaults used when options is NULL. */
CARNOT_API void carnot_filiform_options_default(carnot_filiform_options* out);
CARNOT_API carnot_status carnot_example_filiform(int step, int translations,
                                                 const carnot_filiform_options* options,
                                                 carnot_filiform_report** out);
CARNOT_API void carnot_filiform_report_free(carnot_filiform_report* report);
CARNOT_API double carnot_filiform_central_residual(const carnot_filiform_report* report);
CARNOT_API int carnot_filiform_passed(const carnot_filiform_report* report);
CARNOT_API size_t carnot_filiform_scan_count(const carnot_filiform_report* report);
CARNOT_API carnot_status carnot_filiform_scan_get(const carnot_filiform_report* report, size_t index,
                                                  double* top_coefficient, double* horizon,
                                                  carnot_escape_run* run);

#ifdef __cplusplus
}
#endif

#endif /* CARNOT_CARNOT_H */
