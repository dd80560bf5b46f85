/* C interface to the graph-equivalence library: handles, counts, verdicts. */

#ifndef WLHOM_H
#define WLHOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define WLHOM_OK 0

/**
 * Malformed input: unparsable graph, NULL handle, or invalid argument.
 */
#define WLHOM_ERR_INPUT 2

/**
 * The request exceeds a capacity budget and was refused, not attempted.
 */
#define WLHOM_ERR_CAPACITY 3

/**
 * An immutable simple graph. Opaque; create with the constructors and
 * release with `wlhom_graph_free`.
 */
typedef struct wlhom_graph wlhom_graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses one graph6 code. Returns NULL on failure; see `wlhom_last_error`.
 *
 * # Safety
 * `code` must be a NUL-terminated string or NULL.
 */
struct wlhom_graph *wlhom_graph_from_graph6(const char *code);

/**
 * Builds a graph from a spec string: a generator such as `cycle:6`,
 * `path:3`, `star:4`, `spider:3,2`, `complete:4`, or `empty:2`; a raw
 * `g6:` code; a named fixture; or a `+`-joined disjoint union of specs.
 * Returns NULL on failure; see `wlhom_last_error`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string or NULL.
 */
struct wlhom_graph *wlhom_graph_from_spec(const char *spec);

/**
 * Releases a graph handle. NULL is ignored.
 *
 * # Safety
 * `g` must be NULL or a live handle, which becomes invalid afterwards.
 */
void wlhom_graph_free(struct wlhom_graph *g);

/**
 * Number of vertices, or -1 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
int64_t wlhom_graph_order(const struct wlhom_graph *g);

/**
 * Number of edges, or -1 for a NULL handle.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
int64_t wlhom_graph_size(const struct wlhom_graph *g);

/**
 * Writes the graph6 code of the graph to `*out` as a fresh string.
 *
 * # Safety
 * `g` must be NULL or a live handle; `out` must be valid for writes.
 */
int wlhom_graph_to_graph6(const struct wlhom_graph *g, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string obtained from this library, which becomes
 * invalid afterwards.
 */
void wlhom_string_free(char *s);

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *wlhom_last_error(void);

/**
 * Counts homomorphisms from `pattern` into `target` and writes the count
 * to `*out` as a fresh decimal string (counts overflow machine words).
 *
 * # Safety
 * Graph arguments must be NULL or live handles; `out` must be valid for
 * writes.
 */
int wlhom_hom_count(const struct wlhom_graph *pattern,
                    const struct wlhom_graph *target,
                    char **out);

/**
 * Writes 1 to `*out` when iterated color refinement tells the graphs
 * apart, 0 when it does not.
 *
 * # Safety
 * Graph arguments must be NULL or live handles; `out` must be valid for
 * writes.
 */
int wlhom_refinement_distinguishes(const struct wlhom_graph *g,
                                   const struct wlhom_graph *h,
                                   int *out);

/**
 * Writes 1 to `*out` when `k`-tuple refinement tells the graphs apart,
 * 0 when it does not. Refuses oversized joint tuple spaces.
 *
 * # Safety
 * Graph arguments must be NULL or live handles; `out` must be valid for
 * writes.
 */
int wlhom_tuple_refinement_distinguishes(const struct wlhom_graph *g,
                                         const struct wlhom_graph *h,
                                         size_t k,
                                         int *out);

/**
 * Writes 1 to `*out` when the graphs share their characteristic
 * polynomial, 0 otherwise. Exact integer arithmetic throughout.
 *
 * # Safety
 * Graph arguments must be NULL or live handles; `out` must be valid for
 * writes.
 */
int wlhom_cospectral(const struct wlhom_graph *g, const struct wlhom_graph *h, int *out);

/**
 * Writes 1 to `*out` when the graphs have equal walk counts at every
 * length (equal walk fingerprints), 0 otherwise.
 *
 * # Safety
 * Graph arguments must be NULL or live handles; `out` must be valid for
 * writes.
 */
int wlhom_walk_fingerprints_equal(const struct wlhom_graph *g,
                                  const struct wlhom_graph *h,
                                  int *out);

/**
 * Decides feasibility of the flat commutation system for the pair and
 * writes 1 (feasible) or 0 to `*out`. `nonneg` selects the nonnegative
 * variant; otherwise solutions range over all reals. Exact.
 *
 * # Safety
 * Graph arguments must be NULL or live handles; `out` must be valid for
 * writes.
 */
int wlhom_flat_system_feasible(const struct wlhom_graph *g,
                               const struct wlhom_graph *h,
                               int nonneg,
                               int *out);

/**
 * Decides feasibility of the level-`level` lifted system over partial
 * isomorphisms and writes 1 (feasible) or 0 to `*out`. `nonneg` selects
 * the nonnegative variant. `budget_vars` caps the variable count; pass 0
 * for the built-in default. Exact.
 *
 * # Safety
 * Graph arguments must be NULL or live handles; `out` must be valid for
 * writes.
 */
int wlhom_lifted_system_feasible(const struct wlhom_graph *g,
                                 const struct wlhom_graph *h,
                                 size_t level,
                                 int nonneg,
                                 uint64_t budget_vars,
                                 int *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WLHOM_H */
