#ifndef PERIRICHARDS_PERIRICHARDS_H
#define PERIRICHARDS_PERIRICHARDS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PRC_BUILDING_LIBRARY)
#    define PRC_API __declspec(dllexport)
#  else
#    define PRC_API __declspec(dllimport)
#  endif
#else
#  define PRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The nonzero values double as the CLI exit codes. */
typedef enum prc_status {
  PRC_OK = 0,
  PRC_ERR_INTERNAL = 1,
  PRC_ERR_CONFIG = 2,
  PRC_ERR_IO = 3,
  PRC_ERR_INSTABILITY = 4,
  PRC_ERR_VERIFICATION = 5,
  PRC_ERR_INVALID_ARGUMENT = 6,
  PRC_ERR_BUFFER_TOO_SMALL = 7
} prc_status;

typedef struct prc_config prc_config;
typedef struct prc_simulation prc_simulation;

/* Receives one line of human-readable report text (no trailing newline). */
typedef void (*prc_line_callback)(const char* line, void* user);

typedef struct prc_diagnostics {
  double t;
  size_t step_index;
  size_t n_nodes;
  double min_theta;
  double max_theta;
  size_t clamp_count;
  double rhs_norm;
} prc_diagnostics;

typedef struct prc_run_result {
  size_t steps_planned;
  size_t steps_completed;
  size_t snapshots;
  size_t clamp_count;
  double final_time;
  double min_theta;
  double max_theta;
  int completed;
} prc_run_result;

PRC_API const char* prc_version(void);

/* Message of the last failed call on this thread; "" if none. */
PRC_API const char* prc_last_error(void);

PRC_API size_t prc_preset_count(void);
/* NULL when index is out of range. */
PRC_API const char* prc_preset_name(size_t index);

/* Configuration. Every successful constructor must be paired with
   prc_config_free. */
PRC_API prc_status prc_config_from_preset(const char* name, prc_config** out);
/* A preset name or a path to a config file. */
PRC_API prc_status prc_config_load(const char* name_or_path, prc_config** out);
PRC_API prc_status prc_config_parse(const char* text, prc_config** out);
PRC_API prc_status prc_config_clone(const prc_config* config, prc_config** out);
PRC_API void prc_config_free(prc_config* config);

/* Writes the canonical text including the terminating NUL. *needed receives
   the required capacity; buffer may be NULL when capacity is 0. */
PRC_API prc_status prc_config_serialize(const prc_config* config, char* buffer, size_t capacity, size_t* needed);

/* key is "section.key". get writes "" for keys that are unset or not
   applicable to the config. */
PRC_API prc_status prc_config_set(prc_config* config, const char* key, const char* value);
PRC_API prc_status prc_config_get(const prc_config* config, const char* key, char* buffer, size_t capacity,
                                  size_t* needed);
PRC_API prc_status prc_config_validate(const prc_config* config);
PRC_API prc_status prc_config_hash(const prc_config* config, uint64_t* out);

/* Step-by-step simulation. */
PRC_API prc_status prc_simulation_create(const prc_config* config, prc_simulation** out);
PRC_API void prc_simulation_free(prc_simulation* sim);
/* Advances up to n_steps explicit Euler steps. Returns PRC_ERR_INSTABILITY,
   leaving the last good state in place, when a step fails or the clamp limit
   is exceeded. */
PRC_API prc_status prc_simulation_step(prc_simulation* sim, size_t n_steps);
PRC_API prc_status prc_simulation_diagnostics(const prc_simulation* sim, prc_diagnostics* out);
/* Copy n_nodes values; capacity is in doubles. */
PRC_API prc_status prc_simulation_theta(const prc_simulation* sim, double* out, size_t capacity);
PRC_API prc_status prc_simulation_depths(const prc_simulation* sim, double* out, size_t capacity);

/* Full run with CSV/SVG/summary output. Progress and file names are reported
   through callback (may be NULL). Returns PRC_ERR_INSTABILITY after writing
   partial outputs when the run stops early. result may be NULL. */
PRC_API prc_status prc_run_scenario(const prc_config* config, prc_run_result* result, prc_line_callback callback,
                                    void* user);

/* Verification harness; PRC_ERR_VERIFICATION when a check fails. */
PRC_API prc_status prc_verify_transforms(int max_degree, int inject_fault, prc_line_callback callback, void* user);
PRC_API prc_status prc_verify_operator(const prc_config* config, const int* n_list, size_t n_count,
                                       prc_line_callback callback, void* user);

#ifdef __cplusplus
}
#endif

#endif
