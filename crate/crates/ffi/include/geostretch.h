#ifndef GEOSTRETCH_H
#define GEOSTRETCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_ARGUMENT = 2,
  GS_STATUS_INVALID_VERTEX = 3,
  GS_STATUS_INVALID_GRAPH = 4,
  GS_STATUS_PARSE = 5,
  GS_STATUS_IO = 6,
  GS_STATUS_GRAPH_MISMATCH = 7,
  GS_STATUS_CORRUPT_FILE = 8,
  GS_STATUS_TOO_LARGE = 9,
  GS_STATUS_PANIC = 10,
} GsStatus;

/**
 * Opaque graph handle.
 */
typedef struct GsGraph GsGraph;

/**
 * Opaque oracle handle.
 */
typedef struct GsOracle GsOracle;

typedef struct GsStretchReport {
  double stretch;
  size_t witness_p;
  size_t witness_q;
  size_t witness_source;
  uint64_t pairs_examined;
} GsStretchReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code; "unknown status" for values
 * outside [`GsStatus`]. Never null.
 */
const char *gs_status_string(int32_t status);

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *gs_last_error_message(void);

/**
 * Builds a graph from `m` edges `(us[i], vs[i], lengths[i])`.
 *
 * # Safety
 * The three arrays must hold `m` elements; `out` must be writable.
 */
enum GsStatus gs_graph_from_edges(size_t vertex_count,
                                  const size_t *us,
                                  const size_t *vs,
                                  const double *lengths,
                                  size_t m,
                                  struct GsGraph **out);

/**
 * Loads an edge-list file. Parallel edges are collapsed to the shortest.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GsStatus gs_graph_load_edge_list(const char *path, struct GsGraph **out);

/**
 * Loads a triangle mesh in OFF format as its edge graph.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GsStatus gs_graph_load_off(const char *path, struct GsGraph **out);

/**
 * # Safety
 * `graph` must come from a `gs_graph_*` constructor and not be used
 * afterwards. Null is ignored.
 */
void gs_graph_free(struct GsGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle or null (returns 0).
 */
size_t gs_graph_vertex_count(const struct GsGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle or null (returns 0).
 */
size_t gs_graph_edge_count(const struct GsGraph *graph);

/**
 * Farthest point sampling from vertex `start`; writes `k` source ids.
 *
 * # Safety
 * `graph` must be a live handle; `out_sources` must hold `k` elements.
 */
enum GsStatus gs_fps(const struct GsGraph *graph, size_t k, size_t start, size_t *out_sources);

/**
 * Oracle over the given `k` sources.
 *
 * # Safety
 * `graph` must be a live handle; `sources` must hold `k` elements; `out`
 * must be writable.
 */
enum GsStatus gs_oracle_build(const struct GsGraph *graph,
                              const size_t *sources,
                              size_t k,
                              struct GsOracle **out);

/**
 * Oracle over `k` sources chosen by farthest point sampling from `start`.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum GsStatus gs_oracle_build_fps(const struct GsGraph *graph,
                                  size_t k,
                                  size_t start,
                                  struct GsOracle **out);

/**
 * # Safety
 * `oracle` must come from a `gs_oracle_*` constructor and not be used
 * afterwards. Null is ignored.
 */
void gs_oracle_free(struct GsOracle *oracle);

/**
 * # Safety
 * `oracle` must be a live handle or null (returns 0).
 */
size_t gs_oracle_source_count(const struct GsOracle *oracle);

/**
 * Copies the source ids, in selection order.
 *
 * # Safety
 * `oracle` must be a live handle; `out_sources` must hold
 * `gs_oracle_source_count(oracle)` elements.
 */
enum GsStatus gs_oracle_sources(const struct GsOracle *oracle, size_t *out_sources);

/**
 * `min_i d(p, s_i) + d(s_i, q)` and the source attaining it. Either output
 * pointer may be null.
 *
 * # Safety
 * `oracle` must be a live handle.
 */
enum GsStatus gs_oracle_query(const struct GsOracle *oracle,
                              size_t p,
                              size_t q,
                              double *out_value,
                              size_t *out_witness);

/**
 * Nearest source to `p` and its distance. Either output pointer may be
 * null.
 *
 * # Safety
 * `oracle` must be a live handle.
 */
enum GsStatus gs_oracle_nearest_source(const struct GsOracle *oracle,
                                       size_t p,
                                       size_t *out_source,
                                       double *out_distance);

/**
 * # Safety
 * `oracle` must be a live handle; `path` a NUL-terminated string.
 */
enum GsStatus gs_oracle_save(const struct GsOracle *oracle, const char *path);

/**
 * Loads an oracle file. If `graph` is not null, the file must have been
 * built for that graph.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `graph` a live handle or null;
 * `out` must be writable.
 */
enum GsStatus gs_oracle_load(const char *path, const struct GsGraph *graph, struct GsOracle **out);

/**
 * Stretch factor of `oracle` on `graph`, scanning adjacent pairs only.
 *
 * # Safety
 * `graph` and `oracle` must be live handles; `out` must be writable.
 */
enum GsStatus gs_stretch_fast(const struct GsGraph *graph,
                              const struct GsOracle *oracle,
                              struct GsStretchReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEOSTRETCH_H */
