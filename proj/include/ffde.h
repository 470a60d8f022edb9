#ifndef FFDE_H
#define FFDE_H

/* C API of the fractional fast diffusion laboratory.
 *
 * All functions return an ffde_status; FFDE_OK is 0. On failure a
 * thread-local message is available through ffde_last_error. Handles are
 * opaque and must be released with the matching *_free call. Objects are
 * immutable once created and may be shared across threads for reading.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ffde_status {
  FFDE_OK = 0,
  FFDE_ERR_INVALID_ARGUMENT = 1,
  FFDE_ERR_CONSTRUCTION = 2,
  FFDE_ERR_SOLVER = 3,
  FFDE_ERR_IO = 4,
  FFDE_ERR_VIOLATED = 5, /* a verdict-bearing check reported violated */
  FFDE_ERR_INTERNAL = 6,
  FFDE_ERR_BUFFER_TOO_SMALL = 7
} ffde_status;

typedef struct ffde_grid ffde_grid;
typedef struct ffde_operator ffde_operator; /* operator + spectrum + Green matrix */
typedef struct ffde_field ffde_field;
typedef struct ffde_trajectory ffde_trajectory;

/* last error message for the calling thread; always NUL-terminated */
void ffde_last_error(char* buf, size_t len);

/* ---- grids ---- */
ffde_status ffde_grid_create(int dim, int n_per_axis, ffde_grid** out);
void ffde_grid_free(ffde_grid* g);
ffde_status ffde_grid_size(const ffde_grid* g, int* out);
ffde_status ffde_grid_spacing(const ffde_grid* g, double* out);

/* ---- operators ---- */
/* kind: "local" | "sfl" | "rfl" | "cfl"; allow_2d gates the dense 2D kernels */
ffde_status ffde_operator_create(const ffde_grid* g, const char* kind, double s, int allow_2d,
                                 ffde_operator** out);
void ffde_operator_free(ffde_operator* op);
ffde_status ffde_operator_lambda1(const ffde_operator* op, double* out);
ffde_status ffde_operator_gamma(const ffde_operator* op, double* out);
ffde_status ffde_operator_offdiag_nonpositive(const ffde_operator* op, int* out);
/* ground state values, one per node */
ffde_status ffde_operator_phi1(const ffde_operator* op, double* buf, size_t len);

/* ---- fields ---- */
ffde_status ffde_field_create(const ffde_grid* g, const double* values, size_t len,
                              ffde_field** out);
void ffde_field_free(ffde_field* f);
ffde_status ffde_field_values(const ffde_field* f, double* buf, size_t len);
/* p >= 1, or HUGE_VAL for the sup norm */
ffde_status ffde_field_lp_norm(const ffde_field* f, double p, double* out);

/* ---- flow ---- */
/* One proximal (backward Euler) step: w + dt A w^m = u. */
ffde_status ffde_proximal_step(const ffde_operator* op, const ffde_field* u, double m, double dt,
                               ffde_field** out);
/* Separable stationary profile w with A w^m = w/(1-m). */
ffde_status ffde_separable_profile(const ffde_operator* op, double m, ffde_field** out);
/* Full run; config_text uses the same key = value format as config files.
 * Extinction estimates are written to *t_hat/*t_fit (negative if none). */
ffde_status ffde_run_flow(const ffde_operator* op, const ffde_field* u0, double m,
                          const char* config_text, double* t_hat, double* t_fit,
                          ffde_trajectory** out);
void ffde_trajectory_free(ffde_trajectory* t);
ffde_status ffde_trajectory_size(const ffde_trajectory* t, int* out);
ffde_status ffde_trajectory_time(const ffde_trajectory* t, int idx, double* out);

/* ---- exponent table ---- */
ffde_status ffde_constants_json(int N, double s, double m, double gamma, char* buf, size_t len);

/* ---- command layer (what the CLI calls) ----
 * config_text is the full experiment configuration; out_dir/run_dir are
 * filesystem paths. Return values mirror the CLI exit codes.
 */
int ffde_cmd_operator(const char* config_text, const char* out_dir, char* json_buf, size_t len);
int ffde_cmd_solve(const char* config_text, const char* out_dir, char* run_dir_buf, size_t len);
int ffde_cmd_verify(const char* config_text, const char* run_dir);
int ffde_cmd_sweep(const char* config_text, const char* out_dir, int resume);
int ffde_cmd_constants(int N, double s, double m, double gamma, int as_json, char* buf,
                       size_t len);

#ifdef __cplusplus
}
#endif

#endif /* FFDE_H */
