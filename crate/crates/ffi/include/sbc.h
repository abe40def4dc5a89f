/* C interface for the betweenness maintenance engine. */

#ifndef SBC_H
#define SBC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SbcStatus {
  SBC_STATUS_OK = 0,
  SBC_STATUS_NULL_POINTER,
  SBC_STATUS_INVALID_ARGUMENT,
  SBC_STATUS_SELF_LOOP,
  SBC_STATUS_EDGE_EXISTS,
  SBC_STATUS_EDGE_MISSING,
  SBC_STATUS_VERTEX_OUT_OF_RANGE,
  SBC_STATUS_PANIC,
} SbcStatus;

typedef struct SbcEngine SbcEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an engine over `n` isolated vertices. Returns null only if the
// allocation itself panics.
struct SbcEngine *sbc_engine_new(size_t n, size_t workers);

// Creates an engine from `pairs` edges given as `2*pairs` vertex ids
// (u0, v0, u1, v1, ...). On failure returns null and, when `status` is
// non-null, says why.
//
// # Safety
// `edges` must point to `2*pairs` readable u32 values (may be null only
// when `pairs` is zero); `status` may be null.
struct SbcEngine *sbc_engine_from_edges(size_t n,
                                        const uint32_t *edges,
                                        size_t pairs,
                                        size_t workers,
                                        enum SbcStatus *status);

// # Safety
// `engine` must come from a constructor in this header and not be freed
// twice. Null is a no-op.
void sbc_engine_free(struct SbcEngine *engine);

// Inserts edge (u, v), updating all scores. `u` or `v` one past the current
// vertex count grows the graph.
//
// # Safety
// `engine` must be a live engine pointer, not yet freed.
enum SbcStatus sbc_engine_add_edge(struct SbcEngine *engine, uint32_t u, uint32_t v);

// Removes edge (u, v), updating all scores.
//
// # Safety
// `engine` must be a live engine pointer.
enum SbcStatus sbc_engine_remove_edge(struct SbcEngine *engine, uint32_t u, uint32_t v);

// # Safety
// `engine` must be a live engine pointer or null (returns 0).
size_t sbc_engine_vertex_count(const struct SbcEngine *engine);

// # Safety
// `engine` must be a live engine pointer or null (returns 0).
size_t sbc_engine_edge_count(const struct SbcEngine *engine);

// Writes one vertex's betweenness to `out`.
//
// # Safety
// `engine` must be live or null; `out` must point to a writable f64.
enum SbcStatus sbc_engine_vertex_score(const struct SbcEngine *engine, uint32_t v, double *out);

// Fills `out` with all vertex scores; `len` must be at least the vertex
// count.
//
// # Safety
// `engine` must be live or null; `out` must point to `len` writable f64s.
enum SbcStatus sbc_engine_vertex_scores(const struct SbcEngine *engine, double *out, size_t len);

// Writes edge (u, v)'s betweenness to `out`.
//
// # Safety
// `engine` must be live or null; `out` must point to a writable f64.
enum SbcStatus sbc_engine_edge_score(const struct SbcEngine *engine,
                                     uint32_t u,
                                     uint32_t v,
                                     double *out);

// Reports the edge with the highest betweenness (ties to the smallest
// endpoint pair), the selection a divisive clustering loop would remove.
//
// # Safety
// `engine` must be live or null; `u`, `v`, `score` must be writable or null.
enum SbcStatus sbc_engine_top_edge(const struct SbcEngine *engine,
                                   uint32_t *u,
                                   uint32_t *v,
                                   double *score);

// Static description of a status code; never null.
const char *sbc_status_message(enum SbcStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SBC_H */
