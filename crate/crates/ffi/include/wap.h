/* C interface to the wap word-analysis library. */

#ifndef WAP_H
#define WAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call in this ABI.
typedef enum WapStatus {
  WAP_STATUS_OK = 0,
  WAP_STATUS_INTERNAL_ERROR = 1,
  // Malformed spec, letters, or preconditions (bad morphism, bad start).
  WAP_STATUS_INVALID_INPUT = 2,
  // A search or stream budget ran out.
  WAP_STATUS_BUDGET_EXHAUSTED = 3,
  WAP_STATUS_NULL_ARGUMENT = 4,
} WapStatus;

// Which rule decided weak abelian periodicity.
typedef enum WapDecisionRule {
  WAP_DECISION_RULE_ZERO_CROSSING = 0,
  WAP_DECISION_RULE_ENDPOINT = 1,
  WAP_DECISION_RULE_FORMULA = 2,
} WapDecisionRule;

// Why the fixed point is (or is not) bounded weak abelian periodic.
typedef enum WapBoundedReason {
  WAP_BOUNDED_REASON_ABELIAN_EQUIVALENT_IMAGES = 0,
  WAP_BOUNDED_REASON_ALTERNATING_FORM = 1,
  WAP_BOUNDED_REASON_NOT_BOUNDED = 2,
} WapBoundedReason;

// An infinite-word letter source (opaque).
typedef struct WapStream WapStream;

// Exact verdicts for one binary uniform morphism and start letter.
// `a_max`, `t`, `t_pos` and `lhs` are meaningful only when
// `has_formula_data` is 1 (the formula rule was evaluated).
typedef struct WapDecision {
  uint64_t matrix_a;
  uint64_t matrix_b;
  uint64_t matrix_c;
  uint64_t matrix_d;
  uint64_t image_length;
  // 1 when the fixed point from the start letter is WAP.
  uint8_t wap;
  enum WapDecisionRule rule;
  int64_t delta;
  uint8_t has_formula_data;
  int64_t a_max;
  int64_t t;
  uint64_t t_pos;
  int64_t lhs;
  // 1 when the fixed point is bounded WAP (equivalently, abelian
  // periodic).
  uint8_t bounded_wap;
  enum WapBoundedReason bounded_reason;
} WapDecision;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the most recent error message of this thread into `buf`
// (NUL-terminated, truncated to `cap`). Returns the full message length
// in bytes, excluding the terminator.
size_t wap_last_error_message(char *buf, size_t cap);

// Library version as a static NUL-terminated string.
const char *wap_version(void);

// Creates a stream from a textual spec
// (`morphic:<i0>/<i1>[/<i2>]@<s> | toeplitz:<pat> | named:<name> |
// periodic:<word> | file:<path>`). On success `*out` owns the stream;
// release it with [`wap_stream_free`].
//
// # Safety
// `spec` must be a NUL-terminated string and `out` a valid pointer.
enum WapStatus wap_stream_new(const char *spec, struct WapStream **out);

// Fills `buf` with up to `cap` letters (values `0`..`2`, not ASCII) and
// stores the count in `*written`. A finite source writes fewer letters
// once exhausted; that is still `Ok`.
//
// # Safety
// `stream`, `buf` (for `cap` bytes) and `written` must be valid.
enum WapStatus wap_stream_next(struct WapStream *stream, uint8_t *buf, size_t cap, size_t *written);

// Number of letters produced so far.
//
// # Safety
// `stream` must be a live handle from [`wap_stream_new`].
uint64_t wap_stream_position(const struct WapStream *stream);

// Alphabet size of the stream (2 or 3).
//
// # Safety
// `stream` must be a live handle from [`wap_stream_new`].
uint8_t wap_stream_alphabet_size(const struct WapStream *stream);

// Releases a stream handle. A null pointer is a no-op.
//
// # Safety
// `stream` must be null or a handle not freed before.
void wap_stream_free(struct WapStream *stream);

// Decides WAP and bounded WAP for the uniform binary morphism
// `0 -> img0, 1 -> img1` and the fixed point from `start`.
//
// # Safety
// `img0` and `img1` must be NUL-terminated strings, `out` a valid pointer.
enum WapStatus wap_decide(const char *img0,
                          const char *img1,
                          uint8_t start,
                          struct WapDecision *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAP_H */
