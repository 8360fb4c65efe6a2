/* C interface of the cpforce library. All handles are opaque; every call
 * that can fail returns a cpf_status and leaves a message retrievable with
 * cpf_last_error() on the calling thread. */
#ifndef CPFORCE_H
#define CPFORCE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define CPF_API __attribute__((visibility("default")))
#else
#define CPF_API
#endif

typedef enum cpf_status {
  CPF_OK = 0,
  CPF_ERR_CONFIG = 1,
  CPF_ERR_DOMAIN = 2,
  CPF_ERR_POLE = 3,
  CPF_ERR_NUMERIC = 4,
  CPF_ERR_CONVERGENCE = 5,
  CPF_ERR_UNPHYSICAL = 6,
  CPF_ERR_NOT_APPLICABLE = 7,
  CPF_ERR_DEGENERATE = 8,
  CPF_ERR_VALIDITY = 9,
  CPF_ERR_INVALID_ARGUMENT = 10,
  CPF_ERR_INTERNAL = 11
} cpf_status;

typedef struct cpf_config cpf_config;
typedef struct cpf_result cpf_result;

CPF_API const char* cpf_version(void);
/* Message of the last failed call on this thread ("" if none). */
CPF_API const char* cpf_last_error(void);
CPF_API const char* cpf_status_name(cpf_status status);

CPF_API cpf_status cpf_config_load_file(const char* path, cpf_config** out);
CPF_API cpf_status cpf_config_load_string(const char* yaml, cpf_config** out);
CPF_API void cpf_config_free(cpf_config* config);

/* Overrides applied on top of a loaded configuration. */
CPF_API cpf_status cpf_config_set_workers(cpf_config* config, int workers);
CPF_API cpf_status cpf_config_set_tolerance(cpf_config* config, double tolerance);
CPF_API cpf_status cpf_config_set_strict(cpf_config* config, int strict);
CPF_API cpf_status cpf_config_set_output(cpf_config* config, const char* path);
CPF_API const char* cpf_config_task(const cpf_config* config);
/* Output path from the configuration; "" when results go to stdout. */
CPF_API const char* cpf_config_output(const cpf_config* config);

/* Runs the configured task. Row-level failures do not fail the call; they
 * are counted in the result. */
CPF_API cpf_status cpf_run(const cpf_config* config, cpf_result** out);
CPF_API void cpf_result_free(cpf_result* result);

/* Rendered table (comment header plus comma-separated rows). */
CPF_API const char* cpf_result_text(const cpf_result* result);
CPF_API size_t cpf_result_rows(const cpf_result* result);
CPF_API size_t cpf_result_columns(const cpf_result* result);
CPF_API const char* cpf_result_column_name(const cpf_result* result, size_t column);
CPF_API double cpf_result_value(const cpf_result* result, size_t row, size_t column);
CPF_API const char* cpf_result_row_status(const cpf_result* result, size_t row);
CPF_API int cpf_result_error_rows(const cpf_result* result);
CPF_API int cpf_result_warning_rows(const cpf_result* result);
/* 0 ok, 3 numeric failure in some row, 4 warning under strict mode. */
CPF_API int cpf_result_exit_code(const cpf_result* result);

/* Direct evaluations for a two-level atom over a Drude-Lorentz half space
 * (omega_T = 1). Quantities in internal units. */
typedef struct cpf_two_level {
  double omega_P;
  double gamma;
  double coupling_g;
  double omega10;
  double theta;
  double z;
} cpf_two_level;

typedef struct cpf_shift_result {
  double delta_omega;
  double gamma;
  double omega_tilde;
  double delta_omega_bare;
  double gamma_bare;
  double delta_omega_offres;
  int iterations;
  int validity_warning;
} cpf_shift_result;

CPF_API cpf_status cpf_two_level_shift(const cpf_two_level* in, cpf_shift_result* out);

#ifdef __cplusplus
}
#endif

#endif
