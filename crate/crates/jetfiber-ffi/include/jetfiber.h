/* C interface to the jetfiber jet-scheme engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/jetfiber-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes, numerically identical to the CLI exit codes: 0 success,
// 1 verification failure, 2 step budget exhausted, 3 usage error.
typedef enum {
  JF_STATUS_OK = 0,
  JF_STATUS_VERIFY_FAILED = 1,
  JF_STATUS_BUDGET_EXCEEDED = 2,
  JF_STATUS_USAGE = 3,
} JfStatus;

// An opaque verification session: a surface, a jet order, and the step
// budget applied to every basis computation made through it.
typedef struct JfSession JfSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The crate version as a static NUL-terminated string. Never freed.
const char *jf_version(void);

// The message of the most recent failure on this thread, or null if the
// most recent call succeeded. The pointer stays valid until the next
// jetfiber call on the same thread; do not free it.
const char *jf_last_error(void);

// Open a session on `surface` ("d40" or "d41") at jet order `m`.
// Returns null (with the error readable via [`jf_last_error`]) on an
// unknown surface name.
//
// # Safety
// `surface` must be null or point to a NUL-terminated string.
JfSession *jf_session_new(const char *surface, uint32_t m);

// Replace the session's reduction-step budget. `steps` must be positive.
//
// # Safety
// `session` must be null or a pointer from [`jf_session_new`] that has
// not been freed.
JfStatus jf_session_set_budget(JfSession *session, uint64_t steps);

// Release a session. Null is ignored.
//
// # Safety
// `session` must be null or a pointer from [`jf_session_new`] that has
// not already been freed.
void jf_session_free(JfSession *session);

// Release a string returned by any jetfiber function. Null is ignored.
//
// # Safety
// `text` must be null or a string pointer returned by this library that
// has not already been freed.
void jf_string_free(char *text);

// Write the jet equations of degrees 0..m as one newline-joined string.
// Indices below `mod_p`/`mod_q`/`mod_r` (for x, y, z respectively) are
// reduced away first; pass zeros to keep every term.
//
// # Safety
// `session` must be a live session pointer and `out_lines` must point to
// writable memory for one pointer.
JfStatus jf_expand_lines(const JfSession *session,
                         uint32_t mod_p,
                         uint32_t mod_q,
                         uint32_t mod_r,
                         char **out_lines);

// Write the decomposition report (components, dimensions, witnesses,
// symmetry images, separations) as a single-line JSON document.
//
// # Safety
// `session` must be a live session pointer and `out_json` must point to
// writable memory for one pointer.
JfStatus jf_decompose_json(const JfSession *session, char **out_json);

// Write the intersection-poset report as a single-line JSON document.
// Returns `VerifyFailed` (with the report still written) if the graph is
// not the D4 star or a radical certificate fails.
//
// # Safety
// `session` must be a live session pointer and `out_json` must point to
// writable memory for one pointer.
JfStatus jf_graph_json(const JfSession *session, char **out_json);

// Write the incidence graph in DOT format.
//
// # Safety
// `session` must be a live session pointer and `out_dot` must point to
// writable memory for one pointer.
JfStatus jf_graph_dot(const JfSession *session, char **out_dot);

// Run the full verification suite and write its report as a single-line
// JSON document. Returns `VerifyFailed` if any check fails, and
// `BudgetExceeded` if every check passes but some were skipped for
// budget; the report is written in all three cases.
//
// # Safety
// `session` must be a live session pointer and `out_json` must point to
// writable memory for one pointer.
JfStatus jf_suite_json(const JfSession *session, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
