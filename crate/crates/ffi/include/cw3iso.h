#ifndef CW3ISO_H
#define CW3ISO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Cw3Status {
  Cw3Status_Ok = 0,
  Cw3Status_NullPointer = 1,
  Cw3Status_VertexOutOfRange = 2,
  Cw3Status_SelfLoop = 3,
  Cw3Status_DuplicateEdge = 4,
  Cw3Status_ParseError = 5,
  Cw3Status_InvalidUtf8 = 6,
  Cw3Status_EmptyGraph = 7,
  Cw3Status_Internal = 8,
} Cw3Status;

typedef enum Cw3Format {
  Cw3Format_EdgeList = 0,
  Cw3Format_Graph6 = 1,
} Cw3Format;

typedef enum Cw3Verdict {
  Cw3Verdict_Isomorphic = 0,
  Cw3Verdict_NonIsomorphic = 1,
  Cw3Verdict_CliqueWidthExceeded = 2,
} Cw3Verdict;

/**
 * Opaque graph handle.
 */
typedef struct Cw3Graph Cw3Graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the
 * next call on the same thread; never null.
 */
const char *cw3_last_error(void);

/**
 * A graph on `n` isolated vertices, all of color 0.
 */
struct Cw3Graph *cw3_graph_new(uintptr_t n);

/**
 * # Safety
 * `g` is null or a handle from this library that has not been freed.
 */
void cw3_graph_free(struct Cw3Graph *g);

/**
 * # Safety
 * `g` is null or a live handle.
 */
enum Cw3Status cw3_graph_add_edge(struct Cw3Graph *g, uintptr_t u, uintptr_t v);

/**
 * # Safety
 * `g` is null or a live handle.
 */
enum Cw3Status cw3_graph_set_color(struct Cw3Graph *g, uintptr_t v, uint32_t color);

/**
 * # Safety
 * `g` is null or a live handle.
 */
uintptr_t cw3_graph_vertex_count(const struct Cw3Graph *g);

/**
 * Parses `text` (NUL-terminated) and stores a new handle in `*out`.
 *
 * # Safety
 * `text` is null or a valid C string; `out` is null or writable.
 */
enum Cw3Status cw3_graph_parse(const char *text, enum Cw3Format format, struct Cw3Graph **out);

/**
 * Color-preserving isomorphism test. When the verdict is `Isomorphic`
 * and `witness` is not null, `witness[v]` receives the image of `v`; the
 * buffer must hold `cw3_graph_vertex_count(g)` entries.
 *
 * # Safety
 * `g`, `h` are live handles, `verdict` is writable, and `witness` is null
 * or large enough.
 */
enum Cw3Status cw3_iso(const struct Cw3Graph *g,
                       const struct Cw3Graph *h,
                       enum Cw3Verdict *verdict,
                       uintptr_t *witness);

/**
 * A k-expression for `g` (vertices named `v0, v1, ...`), stored in
 * `*out` and released with `cw3_string_free`. `*out` is set to null when
 * the graph has clique-width above three.
 *
 * # Safety
 * `g` is a live handle; `out` is writable.
 */
enum Cw3Status cw3_decompose(const struct Cw3Graph *g, char **out);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void cw3_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CW3ISO_H */
