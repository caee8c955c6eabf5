#ifndef HEMOFLOW_H
#define HEMOFLOW_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HfStatus {
  HF_STATUS_OK = 0,
  HF_STATUS_NULL_POINTER = 1,
  HF_STATUS_INVALID_CONFIG = 2,
  HF_STATUS_IO = 3,
  HF_STATUS_SOLVER = 4,
  HF_STATUS_TRAINING = 5,
  HF_STATUS_INVALID_ARGUMENT = 6,
  HF_STATUS_PANIC = 7,
} HfStatus;

/**
 * Field selector for the waveform accessors.
 */
typedef enum HfField {
  HF_FIELD_TIME = 0,
  HF_FIELD_AREA = 1,
  HF_FIELD_VELOCITY = 2,
  HF_FIELD_PRESSURE = 3,
} HfField;

/**
 * Result of a synthetic simulation.
 */
typedef struct HfSimulation HfSimulation;

typedef struct HfTrainer HfTrainer;

typedef struct HfLoss {
  double data;
  double residual;
  double boundary;
  double total;
} HfLoss;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL terminated,
 * truncated to `len`). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
uintptr_t hf_last_error_message(char *buf, uintptr_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hf_version(void);

/**
 * Run the solver for a JSON run configuration and keep the midpoint
 * waveform of the last cycle.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HfStatus hf_simulation_run(const char *config_json, struct HfSimulation **out);

/**
 * # Safety
 * `sim` must come from [`hf_simulation_run`] and not be used afterwards.
 */
void hf_simulation_free(struct HfSimulation *sim);

/**
 * Number of waveform samples.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
uintptr_t hf_simulation_len(const struct HfSimulation *sim);

/**
 * Solver steps taken.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
uintptr_t hf_simulation_steps(const struct HfSimulation *sim);

/**
 * Copy one waveform column (SI units) into `buf`, which must hold
 * [`hf_simulation_len`] values.
 *
 * # Safety
 * `sim` must be a live handle and `buf` point to `len` writable doubles.
 */
enum HfStatus hf_simulation_waveform(const struct HfSimulation *sim,
                                     enum HfField field,
                                     double *buf,
                                     uintptr_t len);

/**
 * Create a trainer from a JSON run configuration. With a null
 * `dataset_path` the synthetic set of the configuration is generated.
 *
 * # Safety
 * String arguments must be NUL-terminated (or null where allowed) and
 * `out` a valid pointer.
 */
enum HfStatus hf_trainer_new(const char *config_json,
                             const char *dataset_path,
                             struct HfTrainer **out);

/**
 * # Safety
 * `t` must come from [`hf_trainer_new`] and not be used afterwards.
 */
void hf_trainer_free(struct HfTrainer *t);

/**
 * Advance `epochs` optimizer steps; `loss` (nullable) receives the loss
 * before the last step.
 *
 * # Safety
 * `t` must be a live handle; `loss` null or writable.
 */
enum HfStatus hf_trainer_step(struct HfTrainer *t, uintptr_t epochs, struct HfLoss *loss);

/**
 * Epochs completed so far.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
uintptr_t hf_trainer_epoch(const struct HfTrainer *t);

/**
 * Current `tau_r` [s] and `E0` [Pa].
 *
 * # Safety
 * `t` must be a live handle; outputs writable.
 */
enum HfStatus hf_trainer_parameters(const struct HfTrainer *t, double *tau_r, double *e0);

/**
 * Write a JSON checkpoint of the complete optimizer state.
 *
 * # Safety
 * `t` must be a live handle and `path` NUL-terminated.
 */
enum HfStatus hf_trainer_save_checkpoint(const struct HfTrainer *t, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEMOFLOW_H */
