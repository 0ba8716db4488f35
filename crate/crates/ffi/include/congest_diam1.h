#ifndef CONGEST_DIAM1_H
#define CONGEST_DIAM1_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Distance value standing for "unreachable".
 */
#define CONGEST_INFINITY UINT64_MAX

typedef enum CongestStatus {
  CongestStatus_Ok = 0,
  CongestStatus_NullPointer = 1,
  CongestStatus_InvalidUtf8 = 2,
  CongestStatus_ParseError = 3,
  CongestStatus_InvalidGraph = 4,
  CongestStatus_InvalidParameter = 5,
  CongestStatus_Incompatible = 6,
  CongestStatus_BudgetExceeded = 7,
  CongestStatus_NotHalted = 8,
  CongestStatus_ProtocolFailure = 9,
  CongestStatus_OutOfRange = 10,
  CongestStatus_WrongResultKind = 11,
  CongestStatus_Panic = 12,
} CongestStatus;

/**
 * A directed graph.
 */
typedef struct CongestGraph CongestGraph;

/**
 * A generated family instance: a graph plus a designated source.
 */
typedef struct CongestInstance CongestInstance;

/**
 * Outcome of one protocol run. Outputs are those of vertex 0 for reach1
 * and apsp3 (every vertex computes the same relation) and the per-vertex
 * distances for bfs.
 */
typedef struct CongestResult CongestResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread; do not free.
 */
const char *congest_last_error(void);

void congest_string_free(char *s);

/**
 * Parses canonical JSON `{"n": .., "edges": [[u, v], ..]}` or an edge list.
 */
enum CongestStatus congest_graph_from_json(const char *text, struct CongestGraph **out);

/**
 * Builds a graph from `edge_count` pairs laid out as `[u0, v0, u1, v1, ..]`.
 */
enum CongestStatus congest_graph_from_edges(size_t n,
                                            const size_t *edges,
                                            size_t edge_count,
                                            struct CongestGraph **out);

void congest_graph_free(struct CongestGraph *g);

/**
 * Vertex count, or 0 for a null handle.
 */
size_t congest_graph_vertex_count(const struct CongestGraph *g);

/**
 * Edge count, or 0 for a null handle.
 */
size_t congest_graph_edge_count(const struct CongestGraph *g);

/**
 * Underlying (undirected) diameter; [`CONGEST_INFINITY`] when disconnected.
 */
enum CongestStatus congest_graph_underlying_diameter(const struct CongestGraph *g, uint64_t *out);

enum CongestStatus congest_graph_to_json(const struct CongestGraph *g, char **out);

/**
 * Generates the instance named by a descriptor such as `"J:k=2,sigma=1-2"`.
 */
enum CongestStatus congest_instance_generate(const char *descriptor, struct CongestInstance **out);

void congest_instance_free(struct CongestInstance *inst);

/**
 * Graph of an instance, borrowed: valid while the instance lives; do not free.
 */
const struct CongestGraph *congest_instance_graph(const struct CongestInstance *inst);

/**
 * Designated source vertex, or `usize::MAX` for a null handle.
 */
size_t congest_instance_source(const struct CongestInstance *inst);

/**
 * Graph JSON plus `"source"` and a `"roles"` map.
 */
enum CongestStatus congest_instance_to_json(const struct CongestInstance *inst, char **out);

/**
 * One-round all-pairs reachability. `budget_bits = 0` selects the default
 * `2·⌈log₂ n⌉`.
 */
enum CongestStatus congest_run_reach1(const struct CongestGraph *g,
                                      size_t budget_bits,
                                      struct CongestResult **out);

/**
 * Two-round 3-approximate all-pairs distances.
 */
enum CongestStatus congest_run_apsp3(const struct CongestGraph *g,
                                     size_t budget_bits,
                                     struct CongestResult **out);

/**
 * Flooding BFS from `source`. `max_rounds = 0` selects `n + 1`.
 */
enum CongestStatus congest_run_bfs(const struct CongestGraph *g,
                                   size_t source,
                                   size_t budget_bits,
                                   size_t max_rounds,
                                   struct CongestResult **out);

void congest_result_free(struct CongestResult *r);

size_t congest_result_rounds(const struct CongestResult *r);

size_t congest_result_max_bits(const struct CongestResult *r);

/**
 * Last round in which any vertex broadcast a non-empty message.
 */
size_t congest_result_last_active_round(const struct CongestResult *r);

/**
 * Whether `y` is reachable from `x` (reach1 results only).
 */
enum CongestStatus congest_result_reaches(const struct CongestResult *r,
                                          size_t x,
                                          size_t y,
                                          bool *out);

/**
 * Estimated distance from `x` to `y` (apsp3 results only);
 * [`CONGEST_INFINITY`] when unreachable.
 */
enum CongestStatus congest_result_estimate(const struct CongestResult *r,
                                           size_t x,
                                           size_t y,
                                           uint64_t *out);

/**
 * Distance of `v` from the source (bfs results only).
 */
enum CongestStatus congest_result_distance(const struct CongestResult *r, size_t v, uint64_t *out);

/**
 * Full run report: rounds, max bits, every vertex's output.
 */
enum CongestStatus congest_result_to_json(const struct CongestResult *r, char **out);

/**
 * Runs a named property suite; writes its JSON summary and whether it passed.
 */
enum CongestStatus congest_verify_suite(const char *suite,
                                        uint64_t seed,
                                        bool *passed,
                                        char **summary_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONGEST_DIAM1_H */
