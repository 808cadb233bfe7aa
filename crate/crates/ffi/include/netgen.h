#ifndef NETGEN_H
#define NETGEN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Family codes in the order of the classifier's family list.
typedef enum NetgenFamily {
  NETGEN_FAMILY_ER = 0,
  NETGEN_FAMILY_ID = 1,
  NETGEN_FAMILY_ID_PRIME = 2,
  NETGEN_FAMILY_PA = 3,
  NETGEN_FAMILY_PA_PRIME = 4,
  NETGEN_FAMILY_SC_ALPHA = 5,
  NETGEN_FAMILY_SC_BETA = 6,
  NETGEN_FAMILY_SC_GAMMA = 7,
  NETGEN_FAMILY_SC_DELTA = 8,
  NETGEN_FAMILY_SC_EPSILON = 9,
  NETGEN_FAMILY_SC_ZETA = 10,
  NETGEN_FAMILY_SC_ETA = 11,
  NETGEN_FAMILY_SC_THETA = 12,
  NETGEN_FAMILY_UNCLASSIFIED = 13,
} NetgenFamily;

typedef enum NetgenStatus {
  NETGEN_STATUS_OK = 0,
  NETGEN_STATUS_NULL_POINTER = 1,
  NETGEN_STATUS_INVALID_UTF8 = 2,
  NETGEN_STATUS_PARSE = 3,
  NETGEN_STATUS_INVALID_PARAMETER = 4,
  NETGEN_STATUS_IO = 5,
  NETGEN_STATUS_COMPUTATION = 6,
  NETGEN_STATUS_BUFFER_TOO_SMALL = 7,
  NETGEN_STATUS_PANIC = 8,
} NetgenStatus;

// Opaque generator expression.
typedef struct NetgenGenerator NetgenGenerator;

// Opaque undirected network.
typedef struct NetgenNetwork NetgenNetwork;

// Dissimilarity vectors in the order degree, PageRank, distance, motif.
typedef struct NetgenFitness {
  double distances[4];
  double baseline[4];
  double ratios[4];
  double fitness;
} NetgenFitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *netgen_last_error(void);

// Parses a generator in canonical syntax.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum NetgenStatus netgen_generator_parse(const char *text, struct NetgenGenerator **out);

// # Safety
// `g` must come from this library and not be used afterwards; null is allowed.
void netgen_generator_free(struct NetgenGenerator *g);

// Writes the canonical text of `g` into `buf` (nul-terminated). `needed`
// receives the required size including the terminator; pass a null
// `buf` with `len` 0 to query it.
//
// # Safety
// `g` and `needed` must be valid; `buf` must hold `len` bytes unless null.
enum NetgenStatus netgen_generator_to_string(const struct NetgenGenerator *g,
                                             char *buf,
                                             size_t len,
                                             size_t *needed);

// # Safety
// `g` and `out` must be valid.
enum NetgenStatus netgen_generator_classify(const struct NetgenGenerator *g,
                                            enum NetgenFamily *out);

// Grows a network with `g`; `sample_size` 0 selects the default.
//
// # Safety
// `g` and `out` must be valid.
enum NetgenStatus netgen_synthesize(const struct NetgenGenerator *g,
                                    size_t nodes,
                                    size_t edges,
                                    size_t sample_size,
                                    uint64_t seed,
                                    struct NetgenNetwork **out);

// # Safety
// `out` must be valid.
enum NetgenStatus netgen_network_erdos_renyi(size_t nodes,
                                             size_t edges,
                                             uint64_t seed,
                                             struct NetgenNetwork **out);

// # Safety
// `out` must be valid.
enum NetgenStatus netgen_network_barabasi_albert(size_t nodes,
                                                 size_t edges_per_node,
                                                 uint64_t seed,
                                                 struct NetgenNetwork **out);

// Reads an edge-list file.
//
// # Safety
// `path` must be a nul-terminated string and `out` valid.
enum NetgenStatus netgen_network_read(const char *path, struct NetgenNetwork **out);

// # Safety
// `n` must come from this library and not be used afterwards; null is allowed.
void netgen_network_free(struct NetgenNetwork *n);

// # Safety
// `n` must be valid or null (which yields 0).
size_t netgen_network_node_count(const struct NetgenNetwork *n);

// # Safety
// `n` must be valid or null (which yields 0).
size_t netgen_network_edge_count(const struct NetgenNetwork *n);

// Copies edges as 0-based `(u, v)` pairs into `pairs`, which holds
// `capacity` pairs (`2 * capacity` integers).
//
// # Safety
// `n` must be valid and `pairs` must hold `2 * capacity` values.
enum NetgenStatus netgen_network_edges(const struct NetgenNetwork *n,
                                       uint32_t *pairs,
                                       size_t capacity);

// Scores `g` against `target` with default settings; `baseline_reps` 0
// selects the default baseline size.
//
// # Safety
// All pointers must be valid.
enum NetgenStatus netgen_fitness(const struct NetgenNetwork *target,
                                 const struct NetgenGenerator *g,
                                 uint64_t seed,
                                 size_t baseline_reps,
                                 struct NetgenFitness *out);

// Best-of-`runs` evolutionary search against `target`. On success `best`
// receives a new generator handle and `fitness` its averaged fitness.
//
// # Safety
// All pointers must be valid.
enum NetgenStatus netgen_evolve(const struct NetgenNetwork *target,
                                size_t runs,
                                size_t generations,
                                uint64_t seed,
                                struct NetgenGenerator **best,
                                double *fitness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NETGEN_H */
