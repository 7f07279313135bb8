/*
 * wavesynth C interface.
 *
 * Every function returns a ws_status; results are written through out
 * pointers. On failure the calling thread's last error message (and, for
 * configuration errors, the offending parameter name) can be retrieved with
 * ws_last_error() / ws_last_error_parameter(). Handles are opaque and must be
 * released with the matching *_destroy function; destroying NULL is a no-op.
 * Strings returned through `char**` are owned by the caller and released
 * with ws_string_free(). Strings returned through `const char**` stay valid
 * for the lifetime of the handle they came from.
 */
#ifndef WAVESYNTH_H
#define WAVESYNTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(WAVESYNTH_BUILDING_LIBRARY)
#define WS_API __attribute__((visibility("default")))
#else
#define WS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ws_status {
    WS_OK = 0,
    WS_ERR_DOMAIN = 1,
    WS_ERR_CONFIG = 2,
    WS_ERR_NUMERICAL = 3,
    WS_ERR_IO = 4,
    WS_ERR_INVALID_HANDLE = 5,
    WS_ERR_INTERNAL = 6
} ws_status;

typedef struct ws_complex {
    double re;
    double im;
} ws_complex;

typedef struct ws_context ws_context;
typedef struct ws_density ws_density;
typedef struct ws_nodes ws_nodes;
typedef struct ws_table ws_table;

WS_API const char* ws_version(void);
WS_API const char* ws_status_name(ws_status status);
/* Message of the most recent failure on this thread ("" if none). */
WS_API const char* ws_last_error(void);
/* Parameter named by the most recent configuration error ("" if none). */
WS_API const char* ws_last_error_parameter(void);
WS_API void ws_string_free(char* s);

/* ---- special functions ------------------------------------------------ */
WS_API ws_status ws_bessel_j(int order, double x, double* out);
WS_API ws_status ws_bessel_y(int order, double x, double* out);
WS_API ws_status ws_hankel1_0(double x, ws_complex* out);

/* ---- modal bases ------------------------------------------------------ */
WS_API ws_status ws_context_create(double kappa, int p_max, ws_context** out);
WS_API void ws_context_destroy(ws_context* ctx);
WS_API ws_status ws_context_log_beta(const ws_context* ctx, int p, double* out);
WS_API ws_status ws_context_log_alpha(const ws_context* ctx, int p, double* out);
WS_API ws_status ws_context_tau(const ws_context* ctx, int p, ws_complex* out);
WS_API ws_status ws_context_tau_bounds(const ws_context* ctx, double* tau_minus, double* tau_plus);
/* b_p(r, theta) for 0 <= r <= 1. */
WS_API ws_status ws_circular_wave(const ws_context* ctx, int p, double r, double theta, ws_complex* out);
/* a_p(phi, zeta). */
WS_API ws_status ws_herglotz_poly(const ws_context* ctx, int p, double phi, double zeta, ws_complex* out);

/* ---- plane waves ------------------------------------------------------ */
WS_API ws_status ws_evanescent_wave(double kappa, double phi, double zeta, double x, double y, ws_complex* out);

/* ---- sampling --------------------------------------------------------- */
WS_API ws_status ws_density_create(const ws_context* ctx, int P, ws_density** out);
WS_API void ws_density_destroy(ws_density* density);
WS_API ws_status ws_density_rho(const ws_density* density, double zeta, double* out);
WS_API ws_status ws_density_cdf(const ws_density* density, double zeta, double* out);
WS_API ws_status ws_density_cdf_inverse(const ws_density* density, double u, double* out);
WS_API ws_status ws_density_zeta_max(const ws_density* density, double* out);
/* strategy: "deterministic", "sobol" or "random". */
WS_API ws_status ws_nodes_sample(const ws_density* density, int M, const char* strategy, uint64_t seed,
                                 ws_nodes** out);
WS_API void ws_nodes_destroy(ws_nodes* nodes);
WS_API ws_status ws_nodes_count(const ws_nodes* nodes, size_t* out);
WS_API ws_status ws_nodes_get(const ws_nodes* nodes, size_t index, double* phi, double* zeta);

/* ---- regularized least squares -----------------------------------------
 * Solves the column-major rows x cols system a xi ~ b by the eps-truncated
 * SVD pseudo-inverse. xi must hold `cols` entries. Any of residual,
 * coeff_norm and eps_rank may be NULL.
 */
WS_API ws_status ws_solve_regularized(size_t rows, size_t cols, const ws_complex* a, const ws_complex* b,
                                      double eps, ws_complex* xi, double* residual, double* coeff_norm,
                                      int* eps_rank);

/* ---- experiments and tables ------------------------------------------- */
/* Validates config_json (may be NULL or "{}") and returns the fully
 * resolved configuration as canonical JSON. */
WS_API ws_status ws_experiment_resolve(const char* name, const char* config_json, char** resolved_json);
/* Non-zero when the resolved experiment consumes pseudo-random draws. */
WS_API ws_status ws_experiment_randomized(const char* name, const char* config_json, int* out);
WS_API ws_status ws_experiment_run(const char* name, const char* config_json, ws_table** out);
WS_API ws_status ws_table_read_csv(const char* path, ws_table** out);
WS_API void ws_table_destroy(ws_table* table);
WS_API ws_status ws_table_rows(const ws_table* table, size_t* out);
WS_API ws_status ws_table_columns(const ws_table* table, size_t* out);
WS_API ws_status ws_table_column_name(const ws_table* table, size_t column, const char** out);
/* Cell rendered exactly as in the CSV output. */
WS_API ws_status ws_table_cell_text(const ws_table* table, size_t row, size_t column, const char** out);
WS_API ws_status ws_table_cell_double(const ws_table* table, size_t row, size_t column, double* out);
/* Resolved configuration of the run that produced the table ("" for tables read from CSV). */
WS_API ws_status ws_table_config_json(const ws_table* table, const char** out);
/* Writes <dir>/<name>.csv and <dir>/<name>.config.json. */
WS_API ws_status ws_table_write(const ws_table* table, const char* dir, const char* name);

/* ---- plots ------------------------------------------------------------ */
/* y_columns is comma-separated; group_column may be NULL or "". */
WS_API ws_status ws_plot_svg(const char* csv_path, const char* x_column, const char* y_columns,
                             const char* group_column, int log_y, const char* title, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif /* WAVESYNTH_H */
