#ifndef DPORIENT_H
#define DPORIENT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DpStatus {
  DP_STATUS_OK = 0,
  DP_STATUS_NULL_POINTER = 1,
  DP_STATUS_INVALID_UTF8 = 2,
  DP_STATUS_PARSE = 3,
  DP_STATUS_INVALID_INPUT = 4,
  DP_STATUS_CAP_EXCEEDED = 5,
  DP_STATUS_UNKNOWN_FIXTURE = 6,
  DP_STATUS_REPLAY_FAILED = 7,
  DP_STATUS_PANIC = 8,
} DpStatus;

// Outcome of [`dp_solve`].
typedef enum DpSolveResult {
  DP_SOLVE_RESULT_COLORABLE = 0,
  DP_SOLVE_RESULT_NOT_COLORABLE = 1,
  DP_SOLVE_RESULT_BUDGET_EXHAUSTED = 2,
} DpSolveResult;

// An assignment plus an optional fixed orientation.
typedef struct DpInstance DpInstance;

// A certification verdict together with the assignment it was computed for.
typedef struct DpVerdict DpVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *dp_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void dp_string_free(char *s);

// Parses an instance from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum DpStatus dp_instance_from_json(const char *json, struct DpInstance **out);

// Builds a named fixture such as `c4_figure` or `toroidal_grid(4)`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum DpStatus dp_instance_from_fixture(const char *name, uint64_t seed, struct DpInstance **out);

// # Safety
// `inst` must be a live handle and `out` a valid pointer.
enum DpStatus dp_instance_to_json(const struct DpInstance *inst, char **out);

// # Safety
// `inst` must be null or a handle not yet freed.
void dp_instance_free(struct DpInstance *inst);

// Searches for a coloring. On `Colorable`, `coloring_json` (if non-null)
// receives an object mapping each 1-based vertex to its color.
//
// # Safety
// `inst` must be a live handle, `result` a valid pointer, and
// `coloring_json` null or valid.
enum DpStatus dp_solve(const struct DpInstance *inst,
                       uint64_t budget,
                       enum DpSolveResult *result,
                       char **coloring_json);

// Runs certification. `mode` is `auto`, `good`, `signable` or `zsignable`;
// `strategy` is `bounded-first` or `exhaustive`. Null selects the default.
//
// # Safety
// `inst` must be a live handle, string arguments null or NUL-terminated,
// and `out` a valid pointer.
enum DpStatus dp_certify(const struct DpInstance *inst,
                         const char *mode,
                         const char *strategy,
                         const char *caps,
                         struct DpVerdict **out);

// Parses a verdict previously produced by [`dp_verdict_to_json`].
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum DpStatus dp_verdict_from_json(const char *json, struct DpVerdict **out);

// Writes 1 to `certified` for a certificate and 0 for an inconclusive verdict.
//
// # Safety
// `v` must be a live handle and `certified` a valid pointer.
enum DpStatus dp_verdict_is_certified(const struct DpVerdict *v, int32_t *certified);

// # Safety
// `v` must be a live handle and `out` a valid pointer.
enum DpStatus dp_verdict_to_json(const struct DpVerdict *v, char **out);

// Re-checks a certificate from scratch. Inconclusive verdicts and failed
// checks both return `ReplayFailed`.
//
// # Safety
// `v` must be a live handle and `caps` null or NUL-terminated.
enum DpStatus dp_verdict_replay(const struct DpVerdict *v, const char *caps);

// # Safety
// `v` must be null or a handle not yet freed.
void dp_verdict_free(struct DpVerdict *v);

// Even and odd spanning Eulerian subdigraph counts of the instance
// orientation (the fixed one, or the stored edge directions).
//
// # Safety
// `inst` must be a live handle, `caps` null or NUL-terminated, and `out`
// a valid pointer.
enum DpStatus dp_euler_json(const struct DpInstance *inst, const char *caps, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DPORIENT_H */
