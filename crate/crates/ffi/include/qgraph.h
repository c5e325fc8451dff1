#ifndef QGRAPH_H
#define QGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible entry point.
 */
typedef enum QgStatus {
  QG_STATUS_OK = 0,
  /**
   * The check ran and at least one verdict failed; the report is still written.
   */
  QG_STATUS_VERIFICATION_FAILED = 1,
  QG_STATUS_NULL_POINTER = 2,
  QG_STATUS_INVALID_UTF8 = 3,
  QG_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The operation needs a finite backing or a tensor-square target.
   */
  QG_STATUS_UNSUPPORTED = 5,
  QG_STATUS_INTERNAL = 6,
} QgStatus;

/**
 * Opaque Cuntz-Krieger family.
 */
typedef struct QgFamily QgFamily;

/**
 * Opaque directed graph.
 */
typedef struct QgGraph QgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next library call on the same thread.
 */
const char *qg_last_error(void);

/**
 * Library version as a static string.
 */
const char *qg_version(void);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void qg_string_free(char *s);

/**
 * Relation graph of the quantum `n x n` matrix relations.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QgStatus qg_graph_relation(size_t n, struct QgGraph **out);

/**
 * Graph of the transpose involution on `n x n` generators.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QgStatus qg_graph_pi(size_t n, struct QgGraph **out);

/**
 * Line graph of `g` as a new handle.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum QgStatus qg_graph_line(const struct QgGraph *g, struct QgGraph **out);

/**
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum QgStatus qg_graph_vertex_count(const struct QgGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum QgStatus qg_graph_edge_count(const struct QgGraph *g, size_t *out);

/**
 * Graph as JSON (`schema`, `n`, `vertices`, `edges`).
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum QgStatus qg_graph_json(const struct QgGraph *g, char **out);

/**
 * Graph in Graphviz DOT syntax.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum QgStatus qg_graph_dot(const struct QgGraph *g, char **out);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void qg_graph_free(struct QgGraph *g);

/**
 * Builds a named family: `pi2-finite`, `pi2-inf`, `Pi2-inf`, `pin-finite`,
 * `pin-inf` or `claim`. `dim = 0` selects 600; `margin = 0` selects the
 * largest pattern stride. `n` is ignored by the `n = 2` families.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QgStatus qg_family_new(const char *name,
                            size_t n,
                            size_t dim,
                            size_t margin,
                            struct QgFamily **out);

/**
 * Matrix size of the family's backing.
 *
 * # Safety
 * `f` must be a live family handle and `out` a valid pointer.
 */
enum QgStatus qg_family_dim(const struct QgFamily *f, size_t *out);

/**
 * Verifies the Cuntz-Krieger relations and writes the JSON report.
 * Returns `VerificationFailed` with the report written when a verdict fails.
 *
 * # Safety
 * `f` must be a live family handle and `out` a valid pointer.
 */
enum QgStatus qg_family_verify(const struct QgFamily *f, char **out);

/**
 * Dimension of the *-algebra generated by a finite family.
 *
 * # Safety
 * `f` must be a live family handle and `out` a valid pointer.
 */
enum QgStatus qg_family_closure_dim(const struct QgFamily *f, size_t *out);

/**
 * # Safety
 * `f` must be NULL or a handle not yet freed.
 */
void qg_family_free(struct QgFamily *f);

/**
 * Runs the Hopf-axiom suite on a model (`sd`, `group-ring`, `cyclic` with
 * parameter `d`, or `literal` with matrix size `d`) and writes the JSON report.
 *
 * # Safety
 * `model` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QgStatus qg_hopf_check(const char *model, size_t d, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QGRAPH_H */
