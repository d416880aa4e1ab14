#ifndef FPMC_H
#define FPMC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first four match the exit codes of the command line
 * tool.
 */
typedef enum FpmcStatus {
  FPMC_STATUS_OK = 0,
  /**
   * The computation ran and the answer is negative (refuted, failed,
   * inconsistent data).
   */
  FPMC_STATUS_NEGATIVE = 1,
  FPMC_STATUS_INPUT_INVALID = 2,
  FPMC_STATUS_UNSUPPORTED = 3,
  FPMC_STATUS_NULL_POINTER = 10,
  FPMC_STATUS_INVALID_UTF8 = 11,
  FPMC_STATUS_UNKNOWN_COMMAND = 12,
  FPMC_STATUS_PANIC = 13,
} FpmcStatus;

/**
 * Opaque handle to a validated curve configuration.
 */
typedef struct FpmcConfig FpmcConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a configuration from JSON text and stores a new handle in `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FpmcStatus fpmc_config_from_json(const char *json, struct FpmcConfig **out);

/**
 * Releases a handle. Null is accepted.
 *
 * # Safety
 * `config` must come from [`fpmc_config_from_json`] and not be used again.
 */
void fpmc_config_free(struct FpmcConfig *config);

/**
 * Number of curves in the configuration.
 *
 * # Safety
 * `config` is a live handle and `out` a valid pointer.
 */
enum FpmcStatus fpmc_config_len(const struct FpmcConfig *config, size_t *out);

/**
 * Picard-type invariants: number of curves, maximal `-E^2` and maximal
 * genus.
 *
 * # Safety
 * `config` is a live handle and the outputs are valid pointers.
 */
enum FpmcStatus fpmc_config_invariants(const struct FpmcConfig *config,
                                       uint64_t *rho,
                                       uint64_t *delta_e,
                                       uint64_t *p_e);

/**
 * Runs the light-cone certification. `*certified` is 1 when certified and 0
 * when refuted; the status is `Ok` in both cases.
 *
 * # Safety
 * `config` is a live handle and `certified` a valid pointer.
 */
enum FpmcStatus fpmc_certify(const struct FpmcConfig *config, int32_t *certified);

/**
 * Runs a command on JSON input and stores the JSON report in `*out`.
 *
 * Commands: `analyze`, `certify`, `ample`, `ample-minimal`, `ample-reider`,
 * `roots`, `case2b` and `blowup` take configuration or script JSON; `mw`
 * takes a fiber list such as `"E7~+A1~"`; `mw-verify-table` ignores its
 * input; `fixtures` and `fixture-export` take a fixture id. The status
 * mirrors the report's exit code, and a report is produced even when the
 * status is not `Ok`.
 *
 * # Safety
 * `command` and `input` are NUL-terminated strings and `out` is valid.
 */
enum FpmcStatus fpmc_run(const char *command, const char *input, char **out);

/**
 * Releases a string returned by this library. Null is accepted.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void fpmc_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next call into the library on this thread.
 */
const char *fpmc_last_error(void);

/**
 * Library version as a static string.
 */
const char *fpmc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FPMC_H */
