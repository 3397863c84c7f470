/* C interface to the supgmg benchmark solver. */
#ifndef SUPGMG_SUPGMG_H
#define SUPGMG_SUPGMG_H

#include <stddef.h>

#if defined(_WIN32)
#define SUPGMG_API __declspec(dllexport)
#else
#define SUPGMG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum supgmg_status {
  SUPGMG_OK = 0,
  SUPGMG_ERR_INVALID_ARGUMENT = 1,
  SUPGMG_ERR_DEGENERATE_CELL = 2,
  SUPGMG_ERR_SINGULAR_MATRIX = 3,
  SUPGMG_ERR_NO_ANALYTIC_SOLUTION = 4,
  SUPGMG_ERR_IO = 5,
  SUPGMG_ERR_INTERNAL = 99
} supgmg_status;

typedef struct supgmg_config supgmg_config;
typedef struct supgmg_report supgmg_report;

/* One (eps, N) entry of a report. */
typedef struct supgmg_cell {
  double eps;
  int n;
  size_t dofs;
  int levels;
  int iterations;
  int converged;
  double tolerance;
  double setup_seconds;
  double solve_seconds;
  double max_error;
  double energy_error;
  double sd_error;
} supgmg_cell;

SUPGMG_API const char* supgmg_version(void);

/* Message of the last failed call on this thread ("" if none). */
SUPGMG_API const char* supgmg_last_error(void);

SUPGMG_API supgmg_status supgmg_config_create(supgmg_config** out);
SUPGMG_API void supgmg_config_destroy(supgmg_config* cfg);
/* Keys: case, eps, n, nu1, nu2, gamma1, gamma2, relax, tol-form, levels,
   seed, max-iterations, out, export-mesh, errors. Lists are comma separated. */
SUPGMG_API supgmg_status supgmg_config_set(supgmg_config* cfg, const char* key,
                                           const char* value);
SUPGMG_API supgmg_status supgmg_config_load_file(supgmg_config* cfg, const char* path);
/* CSV output path of the configuration ("" when unset). */
SUPGMG_API const char* supgmg_config_output_path(const supgmg_config* cfg);

/* Runs every (eps, N) cell. Unconverged cells are recorded, not fatal. */
SUPGMG_API supgmg_status supgmg_run(const supgmg_config* cfg, supgmg_report** out);
SUPGMG_API void supgmg_report_destroy(supgmg_report* report);

SUPGMG_API size_t supgmg_report_num_cells(const supgmg_report* report);
SUPGMG_API supgmg_status supgmg_report_cell(const supgmg_report* report, size_t index,
                                            supgmg_cell* out);
/* Failure reason of a cell, "" when it converged. */
SUPGMG_API const char* supgmg_report_cell_failure(const supgmg_report* report,
                                                  size_t index);
SUPGMG_API int supgmg_report_all_converged(const supgmg_report* report);

/* Writers accept "-" for standard output (CSV only). */
SUPGMG_API supgmg_status supgmg_report_write_csv(const supgmg_report* report,
                                                 const char* path);
SUPGMG_API supgmg_status supgmg_report_write_residual_csv(const supgmg_report* report,
                                                          const char* path);
SUPGMG_API supgmg_status supgmg_report_write_json(const supgmg_report* report,
                                                  const char* path);

#ifdef __cplusplus
}
#endif

#endif
