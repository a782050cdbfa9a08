#ifndef JOINRANK_H
#define JOINRANK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which input subgroup a query refers to.
typedef enum JrSide {
  JR_SIDE_H = 0,
  JR_SIDE_K = 1,
} JrSide;

// Result of every call.
typedef enum JrStatus {
  JR_STATUS_OK = 0,
  // A required pointer was null.
  JR_STATUS_NULL_POINTER = 1,
  // Text that is not valid UTF-8, words or JSON.
  JR_STATUS_INVALID_INPUT = 2,
  // The request is well formed but has no answer, for example a
  // finite index subgroup passed to a reduction.
  JR_STATUS_DOMAIN_ERROR = 3,
  // An internal consistency check failed.
  JR_STATUS_INTERNAL_ERROR = 4,
  // The library panicked; the handle arguments should be discarded.
  JR_STATUS_PANIC = 5,
} JrStatus;

// A finished reduction together with its certificates.
typedef struct JrReport JrReport;

// A subgroup of a free group, held as its folded graph.
typedef struct JrSubgroup JrSubgroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds the subgroup of the free group of rank `rank` generated by the
// comma-separated words in `gens`.
//
// # Safety
// `gens` must be a NUL-terminated string and `out_handle` a valid pointer.
enum JrStatus jr_subgroup_new(uint32_t rank, const char *gens, struct JrSubgroup **out_handle);

// # Safety
// `h` must come from [`jr_subgroup_new`] and not be used afterwards.
void jr_subgroup_free(struct JrSubgroup *h);

// Rank of the subgroup.
//
// # Safety
// Pointers must be valid.
enum JrStatus jr_subgroup_rank(const struct JrSubgroup *h, size_t *rank);

// Number of vertices of the folded graph.
//
// # Safety
// Pointers must be valid.
enum JrStatus jr_subgroup_vertex_count(const struct JrSubgroup *h, size_t *count);

// Whether `word` lies in the subgroup.
//
// # Safety
// Pointers must be valid and `word` NUL-terminated.
enum JrStatus jr_subgroup_contains(const struct JrSubgroup *h, const char *word, bool *result);

// Whether the subgroup has finite index.
//
// # Safety
// Pointers must be valid.
enum JrStatus jr_subgroup_is_finite_index(const struct JrSubgroup *h, bool *result);

// The folded graph as JSON. Free the string with [`jr_string_free`].
//
// # Safety
// Pointers must be valid.
enum JrStatus jr_subgroup_to_json(const struct JrSubgroup *h, char **json_out);

// Sum of the reduced ranks of the intersections `H ∩ sKs^-1`, one per
// double coset with a nontrivial intersection; `components` receives
// their number.
//
// # Safety
// Pointers must be valid and the handles built over the same alphabet.
enum JrStatus jr_intersection_rank_sum(const struct JrSubgroup *h,
                                       const struct JrSubgroup *k,
                                       size_t *components,
                                       int64_t *rank_sum);

// Reduces the join described by `input_json`
// (`{"rank": n, "H": [...], "K": [...]}`). A `max_steps` of zero means the
// default bound.
//
// # Safety
// `input_json` must be NUL-terminated and `out_report` valid.
enum JrStatus jr_reduce(const char *input_json,
                        uint64_t seed,
                        size_t max_steps,
                        struct JrReport **out_report);

// Seed used when the caller has no preference.
uint64_t jr_default_seed(void);

// # Safety
// `r` must come from [`jr_reduce`] and not be used afterwards.
void jr_report_free(struct JrReport *r);

// Whether every certificate in the report holds.
//
// # Safety
// Pointers must be valid.
enum JrStatus jr_report_all_hold(const struct JrReport *r, bool *result);

// Ranks of one side before and after the reduction.
//
// # Safety
// Pointers must be valid.
enum JrStatus jr_report_ranks(const struct JrReport *r,
                              enum JrSide side,
                              size_t *before,
                              size_t *after);

// The full report as JSON. Free the string with [`jr_string_free`].
//
// # Safety
// Pointers must be valid.
enum JrStatus jr_report_to_json(const struct JrReport *r, char **json_out);

// Re-checks a serialized report against the original input; `all_hold`
// receives the verdict.
//
// # Safety
// Strings must be NUL-terminated and `all_hold` valid.
enum JrStatus jr_verify(const char *report_json,
                        const char *input_json,
                        uint64_t seed,
                        bool *all_hold);

// # Safety
// `s` must come from this library and not be used afterwards.
void jr_string_free(char *s);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next call into the library on the same thread.
const char *jr_last_error(void);

// Machine-readable kind of the last failure on this thread, or null.
const char *jr_last_error_kind(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JOINRANK_H */
