#ifndef BMDIM_BMDIM_H
#define BMDIM_BMDIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BMD_API __declspec(dllexport)
#else
#define BMD_API __attribute__((visibility("default")))
#endif

typedef enum bmd_status {
  BMD_OK = 0,
  BMD_ERR_INTERNAL = 1,
  BMD_ERR_CONFIG = 2,
  BMD_ERR_BUDGET = 3,
  BMD_ERR_STRUCTURAL = 10,
  BMD_ERR_RANGE = 11,
  BMD_ERR_CONSISTENCY = 12,
  BMD_ERR_BOUNDARY = 13,
  BMD_ERR_INVALID_TEST = 14,
  BMD_ERR_DIVERGENT = 15,
  BMD_ERR_ARGUMENT = 16
} bmd_status;

typedef struct bmd_params bmd_params;
typedef struct bmd_report bmd_report;
typedef struct bmd_walk bmd_walk;

BMD_API const char* bmd_version(void);
/* Message of the last failed call on this thread ("" when none). */
BMD_API const char* bmd_last_error(void);
BMD_API const char* bmd_status_name(bmd_status status);

/* Command schema. */
BMD_API size_t bmd_command_count(void);
BMD_API const char* bmd_command_name(size_t index);
BMD_API const char* bmd_command_description(size_t index);
/* CSV header of the command's detail rows. */
BMD_API const char* bmd_command_csv_columns(size_t index);
BMD_API size_t bmd_command_param_count(size_t index);
/* Any out pointer may be NULL. Returns BMD_ERR_ARGUMENT for bad indices. */
BMD_API bmd_status bmd_command_param(size_t command, size_t param, const char** key, const char** default_value,
                                     const char** help, int* is_flag);

/* Parameters: string key/value pairs; later values replace earlier ones. */
BMD_API bmd_params* bmd_params_create(void);
BMD_API bmd_status bmd_params_set(bmd_params* params, const char* key, const char* value);
/* Adds every key=value line of a config file. */
BMD_API bmd_status bmd_params_load(bmd_params* params, const char* path);
BMD_API void bmd_params_destroy(bmd_params* params);

/* Runs a subcommand. On success *report owns the outputs. */
BMD_API bmd_status bmd_run(const char* command, const bmd_params* params, bmd_report** report);
BMD_API const char* bmd_report_json(const bmd_report* report);
BMD_API const char* bmd_report_csv(const bmd_report* report);
BMD_API int bmd_report_check_requested(const bmd_report* report);
BMD_API int bmd_report_check_passed(const bmd_report* report);
BMD_API void bmd_report_destroy(bmd_report* report);

/* Walks in C_n. */
BMD_API bmd_status bmd_walk_generate(uint64_t seed, size_t n, bmd_walk** walk);
BMD_API bmd_status bmd_walk_parse(const char* text, bmd_walk** walk);
BMD_API size_t bmd_walk_steps(const bmd_walk* walk);
/* Value at rational time t ("p/q"), as a double. */
BMD_API bmd_status bmd_walk_eval(const bmd_walk* walk, const char* t, double* value);
/* Text form "<n> <bits>\n"; valid until the walk is destroyed. */
BMD_API const char* bmd_walk_serialize(const bmd_walk* walk);
BMD_API void bmd_walk_destroy(bmd_walk* walk);

/* Energy of the T_Z mass distribution; *divergent is set when alpha >= p/q. */
BMD_API bmd_status bmd_energy_exact(uint64_t p, uint64_t q, const char* alpha, int* divergent, double* value,
                                    double* tail);
/* Compression rate of a 0/1 string. */
BMD_API bmd_status bmd_lz_rate(const char* bits, double* rate, size_t* phrases);

#ifdef __cplusplus
}
#endif

#endif
