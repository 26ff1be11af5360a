#ifndef FERMIGAS_H
#define FERMIGAS_H

#include <stddef.h>

#if defined(FERMIGAS_BUILDING_LIBRARY)
#define FG_API __attribute__((visibility("default")))
#else
#define FG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fg_status {
  FG_OK = 0,
  FG_ERR_CONFIG = 1,
  FG_ERR_NUMERIC = 2,
  FG_ERR_IO = 3,
  FG_ERR_UNSUPPORTED = 4,
  FG_ERR_INTERNAL = 5
} fg_status;

typedef struct fg_potential fg_potential;
typedef struct fg_tf_solution fg_tf_solution;
typedef struct fg_interaction fg_interaction;
typedef struct fg_run_result fg_run_result;

typedef struct fg_tf_summary {
  double lambda;
  double energy;
  double kinetic_integral;
  double interaction_integral;
  double mass;
  double max_lagrange_residual;
  double support_radius;
} fg_tf_summary;

typedef struct fg_scattering_summary {
  double scattering_length;
  double range;
  double fit_residual;
  double scattering_energy;
} fg_scattering_summary;

FG_API const char* fg_version(void);
/* Message of the last failed call on this thread; empty after a success. */
FG_API const char* fg_last_error(void);

/* Specs are JSON objects in the configuration-file format. */
FG_API fg_status fg_potential_create(const char* spec_json, fg_potential** out);
FG_API void fg_potential_destroy(fg_potential* potential);
FG_API fg_status fg_potential_value(const fg_potential* potential, const double x[3], double* out);

FG_API fg_status fg_tf_solve(const fg_potential* potential, fg_tf_solution** out);
FG_API void fg_tf_destroy(fg_tf_solution* solution);
FG_API fg_status fg_tf_summary_get(const fg_tf_solution* solution, fg_tf_summary* out);
FG_API fg_status fg_tf_density(const fg_tf_solution* solution, const double x[3], double* out);

FG_API fg_status fg_interaction_create(const char* spec_json, fg_interaction** out);
FG_API void fg_interaction_destroy(fg_interaction* interaction);
/* r_max <= 0 selects four times the range. */
FG_API fg_status fg_scattering_solve(const fg_interaction* interaction, double r_max, fg_scattering_summary* out);

FG_API fg_status fg_validate_config(const char* config_json);
/* Runs a configuration. out_dir overrides output.directory when non-NULL; jobs >= 1.
   Files are written only when every table was computed. */
FG_API fg_status fg_run(const char* config_json, const char* out_dir, int jobs, int seedless, fg_run_result** out);
/* Same, for a command that needs no sections (verify-all). */
FG_API fg_status fg_run_command(const char* command, const char* out_dir, int jobs, int seedless,
                                fg_run_result** out);
FG_API void fg_run_result_destroy(fg_run_result* result);
FG_API const char* fg_run_result_summary(const fg_run_result* result);
FG_API int fg_run_result_failures(const fg_run_result* result);
FG_API size_t fg_run_result_table_count(const fg_run_result* result);
/* Returns NULL when index is out of range. */
FG_API const char* fg_run_result_table_name(const fg_run_result* result, size_t index);

#ifdef __cplusplus
}
#endif

#endif
