#ifndef HDLP_HDLP_H
#define HDLP_HDLP_H

#include <stddef.h>
#include <stdint.h>

#if defined(HDLP_BUILDING_LIBRARY)
#define HDLP_API __attribute__((visibility("default")))
#else
#define HDLP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdlp_status {
  HDLP_OK = 0,
  HDLP_ERR_INVALID_ARGUMENT = 1,
  HDLP_ERR_CONFIG = 2,
  HDLP_ERR_NUMERIC = 3,
  HDLP_ERR_IO = 4,
  HDLP_ERR_INTERNAL = 5
} hdlp_status;

typedef struct hdlp_dataset hdlp_dataset;
typedef struct hdlp_result hdlp_result;

HDLP_API const char* hdlp_version(void);

/* Message of the last failed call on this thread; "" after a success. */
HDLP_API const char* hdlp_last_error(void);
/* Series named by the last error, when the failure concerned one; else "". */
HDLP_API const char* hdlp_last_error_series(void);
HDLP_API const char* hdlp_status_name(hdlp_status status);

/* ---- datasets ---------------------------------------------------------- */

/* metadata_path may be NULL. */
HDLP_API hdlp_status hdlp_dataset_load(const char* csv_path, const char* metadata_path, hdlp_dataset** out);
/* values is row-major, rows x cols; NaN marks a missing value. */
HDLP_API hdlp_status hdlp_dataset_from_matrix(const double* values, size_t rows, size_t cols,
                                              const char* const* names, hdlp_dataset** out);
/* speed is "slow", "fast" or "none". */
HDLP_API hdlp_status hdlp_dataset_set_series(hdlp_dataset* data, const char* name, int transform_code,
                                             const char* speed);
HDLP_API size_t hdlp_dataset_rows(const hdlp_dataset* data);
HDLP_API size_t hdlp_dataset_cols(const hdlp_dataset* data);
/* NULL when index is out of range. */
HDLP_API const char* hdlp_dataset_name(const hdlp_dataset* data, size_t index);
HDLP_API void hdlp_dataset_free(hdlp_dataset* data);

/* ---- pipelines ----------------------------------------------------------
 * Configurations are JSON objects; the schema is described in the README.
 * Every run returns a result holding a JSON report, a CSV table and an SVG
 * plot. Failures leave *out untouched. */

HDLP_API hdlp_status hdlp_lp_run(const hdlp_dataset* data, const char* config_json, hdlp_result** out);
HDLP_API hdlp_status hdlp_favar_run(const hdlp_dataset* data, const char* config_json, hdlp_result** out);
HDLP_API hdlp_status hdlp_simulate_run(const char* config_json, hdlp_result** out);

/* Strings stay valid until the result is freed. */
HDLP_API const char* hdlp_result_json(const hdlp_result* result);
HDLP_API const char* hdlp_result_csv(const hdlp_result* result);
HDLP_API const char* hdlp_result_svg(const hdlp_result* result);
/* The configuration with every default filled in. */
HDLP_API const char* hdlp_result_config(const hdlp_result* result);
HDLP_API size_t hdlp_result_warning_count(const hdlp_result* result);
HDLP_API const char* hdlp_result_warning(const hdlp_result* result, size_t index);
HDLP_API void hdlp_result_free(hdlp_result* result);

/* ---- numeric kernels ----------------------------------------------------
 * Matrices are column-major. */

/* Minimizes ||y - X b||^2 / T + 2 lambda sum_{j >= n_unpenalized} |b_j|.
 * beta_out has n entries. */
HDLP_API hdlp_status hdlp_lasso(const double* X, size_t T, size_t n, const double* y, size_t n_unpenalized,
                                double lambda, double* beta_out);
/* Bartlett long-run covariance of the T x k score matrix w. omega_out is
 * k x k. lag_adjusted selects the 1/(T - l) autocovariance divisor. */
HDLP_API hdlp_status hdlp_hac_covariance(const double* w, size_t T, size_t k, size_t bandwidth, int lag_adjusted,
                                         double* omega_out);
HDLP_API hdlp_status hdlp_andrews_bandwidth(const double* w, size_t T, size_t k, size_t* bandwidth_out);
/* (B_h)_{1,1} for h = 0..h_max of the simulation VAR(4); out has h_max + 1
 * entries. rho may be NULL for the default taper. */
HDLP_API hdlp_status hdlp_true_irf(size_t P, const double* rho, int sign_switch, int h_max, double* out);

#ifdef __cplusplus
}
#endif

#endif
