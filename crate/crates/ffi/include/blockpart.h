#ifndef BLOCKPART_H
#define BLOCKPART_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum BpStatus {
  BP_STATUS_OK = 0,
  BP_STATUS_NULL_POINTER = 1,
  /**
   * Input text is not valid UTF-8 or not valid JSON for the type.
   */
  BP_STATUS_PARSE = 2,
  /**
   * Input parsed but violates a precondition.
   */
  BP_STATUS_INVALID = 3,
  /**
   * A runtime claim check failed; the message names the claim.
   */
  BP_STATUS_ASSERTION = 4,
  BP_STATUS_PANIC = 5,
} BpStatus;

/**
 * Outcome of [`bp_verify_blocking`].
 */
typedef enum BpVerdict {
  BP_VERDICT_HOLDS = 0,
  BP_VERDICT_COUNTEREXAMPLE = 1,
  BP_VERDICT_BUDGET_EXHAUSTED = 2,
} BpVerdict;

typedef struct BpEmbedding BpEmbedding;

typedef struct BpGraph BpGraph;

typedef struct BpPartition BpPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *bp_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void bp_string_free(char *s);

/**
 * Parses `{"n": .., "edges": [[u, v], ..]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum BpStatus bp_graph_from_json(const char *json, struct BpGraph **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library, not yet freed.
 */
void bp_graph_free(struct BpGraph *g);

/**
 * Vertex count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
size_t bp_graph_vertex_count(const struct BpGraph *g);

/**
 * Edge count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
size_t bp_graph_edge_count(const struct BpGraph *g);

/**
 * Parses `{"rotation": .., "outer_face_edge": [u, v], "outer_face_side": 0|1}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum BpStatus bp_embedding_from_json(const char *json, struct BpEmbedding **out);

/**
 * Seeded stacked triangulation on `n` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum BpStatus bp_stacked_triangulation(size_t n, uint64_t seed, struct BpEmbedding **out);

/**
 * # Safety
 * `e` must be NULL or a handle from this library, not yet freed.
 */
void bp_embedding_free(struct BpEmbedding *e);

/**
 * Copy of the embedded graph.
 *
 * # Safety
 * `e` must be a live embedding handle and `out` writable.
 */
enum BpStatus bp_embedding_graph(const struct BpEmbedding *e, struct BpGraph **out);

/**
 * Parses `{"part_of": [..]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum BpStatus bp_partition_from_json(const char *json, struct BpPartition **out);

/**
 * # Safety
 * `p` must be a live partition handle and `out` writable.
 */
enum BpStatus bp_partition_to_json(const struct BpPartition *p, char **out);

/**
 * # Safety
 * `p` must be NULL or a handle from this library, not yet freed.
 */
void bp_partition_free(struct BpPartition *p);

/**
 * Largest part size, or 0 for NULL.
 *
 * # Safety
 * `p` must be NULL or a live partition handle.
 */
size_t bp_partition_width(const struct BpPartition *p);

/**
 * Number of parts, or 0 for NULL.
 *
 * # Safety
 * `p` must be NULL or a live partition handle.
 */
size_t bp_partition_part_count(const struct BpPartition *p);

/**
 * Part index of vertex `v`.
 *
 * # Safety
 * `p` must be a live partition handle and `out` writable.
 */
enum BpStatus bp_partition_part_of(const struct BpPartition *p, size_t v, size_t *out);

/**
 * Chordal partition of a connected plane graph; every clean path has length
 * at most 6.
 *
 * # Safety
 * `e` must be a live embedding handle and `out` writable.
 */
enum BpStatus bp_chordal_partition(const struct BpEmbedding *e,
                                   size_t tau,
                                   struct BpPartition **out);

/**
 * 2-blocking partition built over a min-fill tree decomposition.
 *
 * # Safety
 * `g` must be a live graph handle and `out` writable.
 */
enum BpStatus bp_two_blocking_partition(const struct BpGraph *g, struct BpPartition **out);

/**
 * Exhaustively checks that no clean path has length `ell + 1`. A found
 * path is written as a JSON array to `counterexample` when that pointer is
 * not NULL; it stays NULL otherwise.
 *
 * # Safety
 * Handles must be live; `verdict` writable; `counterexample` NULL or writable.
 */
enum BpStatus bp_verify_blocking(const struct BpGraph *g,
                                 const struct BpPartition *p,
                                 size_t ell,
                                 uint64_t budget,
                                 enum BpVerdict *verdict,
                                 char **counterexample);

/**
 * Longest clean path length. `exact` is set to 1 when the search finished
 * within `budget`, otherwise 0 and `value` is a lower bound.
 *
 * # Safety
 * Handles must be live; `value` and `exact` writable.
 */
enum BpStatus bp_blocking_number(const struct BpGraph *g,
                                 const struct BpPartition *p,
                                 uint64_t budget,
                                 size_t *value,
                                 int32_t *exact);

/**
 * `binom(2ell+5+t, t) - 1` as a decimal string.
 *
 * # Safety
 * `out` must be writable.
 */
enum BpStatus bp_tw_bound(uint64_t ell, uint64_t t, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCKPART_H */
