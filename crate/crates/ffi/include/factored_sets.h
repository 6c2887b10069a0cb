#ifndef FACTORED_SETS_H
#define FACTORED_SETS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum FfsStatus {
  FFS_STATUS_OK = 0,
  FFS_STATUS_NULL_POINTER = 1,
  FFS_STATUS_INVALID_UTF8 = 2,
  FFS_STATUS_PARSE = 3,
  FFS_STATUS_UNKNOWN_NAME = 4,
  FFS_STATUS_INVALID_ARGUMENT = 5,
  FFS_STATUS_TOO_LARGE = 6,
  FFS_STATUS_PANIC = 7,
} FfsStatus;

// How two histories compare, as returned by [`ffs_before`].
typedef enum FfsTemporalRelation {
  FFS_TEMPORAL_RELATION_EQUAL_HISTORY = 0,
  FFS_TEMPORAL_RELATION_STRICTLY_BEFORE = 1,
  FFS_TEMPORAL_RELATION_STRICTLY_AFTER = 2,
  FFS_TEMPORAL_RELATION_INCOMPARABLE = 3,
} FfsTemporalRelation;

// Outcome of a bounded temporal inference.
typedef enum FfsVerdict {
  // Some model within bounds violates the relation.
  FFS_VERDICT_REFUTED = 0,
  // Every model within bounds satisfies the relation.
  FFS_VERDICT_HOLDS_UP_TO_BOUND = 1,
  // No model of the database exists within bounds.
  FFS_VERDICT_VACUOUS = 2,
} FfsVerdict;

// A parsed orthogonality database.
typedef struct FfsDatabase FfsDatabase;

// A parsed factored set together with its factor and partition names.
typedef struct FfsFactoredSet FfsFactoredSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *ffs_last_error_message(void);

// Number of factorizations of an `n`-element set. `n` is limited to 16.
enum FfsStatus ffs_count_factorizations(uint32_t n, uint64_t *out_count);

// Parses a factored set in the text format read by the `ffs` tool.
enum FfsStatus ffs_factored_set_parse(const char *source, struct FfsFactoredSet **out_set);

void ffs_factored_set_free(struct FfsFactoredSet *set);

// Number of elements. Returns 0 for a null handle.
size_t ffs_factored_set_size(const struct FfsFactoredSet *set);

// Number of factors. Returns 0 for a null handle.
size_t ffs_factored_set_dim(const struct FfsFactoredSet *set);

// Name of factor `index`; bit `index` of a history mask refers to it.
// The string is owned by the caller and released with [`ffs_string_free`].
enum FfsStatus ffs_factor_name(const struct FfsFactoredSet *set, size_t index, char **out_name);

void ffs_string_free(char *s);

// History of a factor or named partition (`_` and `!` are accepted) as a
// bit mask over factor indices.
enum FfsStatus ffs_history(const struct FfsFactoredSet *set,
                           const char *partition,
                           uint64_t *out_mask);

// `X ⊥ Y`, or `X ⊥ Y | Z` when `given` is not null.
enum FfsStatus ffs_orthogonal(const struct FfsFactoredSet *set,
                              const char *x,
                              const char *y,
                              const char *given,
                              bool *out_orthogonal);

// How the histories of `x` and `y` compare.
enum FfsStatus ffs_before(const struct FfsFactoredSet *set,
                          const char *x,
                          const char *y,
                          enum FfsTemporalRelation *out_relation);

// Parses an orthogonality database in the text format read by the `ffs` tool.
enum FfsStatus ffs_database_parse(const char *source, struct FfsDatabase **out_db);

void ffs_database_free(struct FfsDatabase *db);

// Bounded check that `x` is before `y` in every model of the database with
// at most `max_size` elements; strict unless `strict` is false.
// `out_models` receives the number of models checked, or 0 when refuted.
enum FfsStatus ffs_infer_before(const struct FfsDatabase *db,
                                const char *x,
                                const char *y,
                                size_t max_size,
                                bool strict,
                                enum FfsVerdict *out_verdict,
                                uint64_t *out_models);

// Whether some model with at most `max_size` elements exists. On success
// `out_witness_size` is the witness's size, or 0 if there is none.
enum FfsStatus ffs_is_consistent(const struct FfsDatabase *db,
                                 size_t max_size,
                                 bool *out_consistent,
                                 size_t *out_witness_size);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FACTORED_SETS_H */
