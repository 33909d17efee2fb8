#ifndef UIPQ_H
#define UIPQ_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum UipqStatus {
  UIPQ_STATUS_OK = 0,
  UIPQ_STATUS_NULL_POINTER = 1,
  UIPQ_STATUS_INVALID_ARGUMENT = 2,
  UIPQ_STATUS_DOMAIN = 3,
  UIPQ_STATUS_CUTOFF_EXCEEDED = 4,
  UIPQ_STATUS_CAP_EXCEEDED = 5,
  UIPQ_STATUS_UNAVAILABLE = 6,
  UIPQ_STATUS_INVARIANT_VIOLATION = 7,
  UIPQ_STATUS_BUFFER_TOO_SMALL = 8,
  UIPQ_STATUS_OUT_OF_RANGE = 9,
  UIPQ_STATUS_INTERNAL = 10,
} UipqStatus;

/**
 * Cyclic discrete bridge.
 */
typedef struct UipqBridge UipqBridge;

/**
 * Ordered forest of plane trees.
 */
typedef struct UipqForest UipqForest;

/**
 * Exact probability table.
 */
typedef struct UipqLawTable UipqLawTable;

/**
 * Seeded random stream.
 */
typedef struct UipqRng UipqRng;

/**
 * Library version as a static NUL-terminated string.
 */
const char *uipq_version(void);

/**
 * Message for the last failed call on this thread, copied into `buf`.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes; `needed` may be null.
 */
enum UipqStatus uipq_last_error(char *buf, size_t cap, size_t *needed);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum UipqStatus uipq_rng_new(uint64_t seed, struct UipqRng **out);

/**
 * # Safety
 * `rng` must come from `uipq_rng_new` and not be used afterwards.
 */
void uipq_rng_free(struct UipqRng *rng);

/**
 * Offspring law `theta(0..=kmax)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum UipqStatus uipq_law_theta(size_t kmax, struct UipqLawTable **out);

/**
 * Law of the hull perimeter at radius `r`, cut at remaining mass `tail_eps`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum UipqStatus uipq_law_hull_perimeter(size_t r, double tail_eps, struct UipqLawTable **out);

/**
 * Law of the number of maximal-height trees between radii `u < w`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum UipqStatus uipq_law_n_trees(size_t u, size_t w, double tail_eps, struct UipqLawTable **out);

/**
 * Number of stored masses (cutoff + 1).
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_law_len(const struct UipqLawTable *t, size_t *out);

/**
 * Mass at `k` as a double.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_law_mass_f64(const struct UipqLawTable *t, size_t k, double *out);

/**
 * Exact mass at `k` as `"num/den"`.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes; `needed` may be null.
 */
enum UipqStatus uipq_law_mass_exact(const struct UipqLawTable *t,
                                    size_t k,
                                    char *buf,
                                    size_t cap,
                                    size_t *needed);

/**
 * Mass left out of the table, as a double.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_law_tail_bound(const struct UipqLawTable *t, double *out);

/**
 * # Safety
 * `t` must come from a `uipq_law_*` constructor and not be used afterwards.
 */
void uipq_law_free(struct UipqLawTable *t);

/**
 * Samples the hull skeleton of radius `r`; `rotated` selects the uniformly
 * rotated variant, otherwise the spine tree comes first and is marked.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_forest_sample_hull(size_t r,
                                        bool rotated,
                                        struct UipqRng *rng,
                                        struct UipqForest **out);

/**
 * Samples the annulus skeleton between radii `u < w`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_forest_sample_annulus(size_t u,
                                           size_t w,
                                           struct UipqRng *rng,
                                           struct UipqForest **out);

/**
 * Number of trees.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_forest_trees(const struct UipqForest *f, size_t *out);

/**
 * Number of vertices at the height cap.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_forest_top_size(const struct UipqForest *f, size_t *out);

/**
 * Number of trees reaching the height cap.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_forest_max_height_trees(const struct UipqForest *f, size_t *out);

/**
 * JSON encoding of the forest.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes; `needed` may be null.
 */
enum UipqStatus uipq_forest_to_json(const struct UipqForest *f,
                                    char *buf,
                                    size_t cap,
                                    size_t *needed);

/**
 * # Safety
 * `f` must come from a forest constructor and not be used afterwards.
 */
void uipq_forest_free(struct UipqForest *f);

/**
 * Uniform bridge with `2 big_k` steps.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_bridge_sample(size_t big_k, struct UipqRng *rng, struct UipqBridge **out);

/**
 * Bridge from `2K + 1` values starting and ending at 0 with unit steps.
 *
 * # Safety
 * `values` must point to `len` readable integers.
 */
enum UipqStatus uipq_bridge_from_values(const int64_t *values, size_t len, struct UipqBridge **out);

/**
 * Cactus distance between positions `i` and `j`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_bridge_cactus_distance(const struct UipqBridge *b,
                                            size_t i,
                                            size_t j,
                                            uint64_t *out);

/**
 * Whether `k` well-spaced positions lie within cactus distance `5 r`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum UipqStatus uipq_bridge_detect_event(const struct UipqBridge *b,
                                         size_t k,
                                         size_t r,
                                         double c,
                                         bool *out);

/**
 * # Safety
 * `b` must come from a bridge constructor and not be used afterwards.
 */
void uipq_bridge_free(struct UipqBridge *b);

#endif  /* UIPQ_H */
