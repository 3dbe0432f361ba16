#ifndef MLSP_H
#define MLSP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MlspPolarity {
  MLSP_POLARITY_POSITIVE = 0,
  MLSP_POLARITY_NEGATIVE = 1,
} MlspPolarity;

typedef enum MlspStatus {
  MLSP_STATUS_OK = 0,
  MLSP_STATUS_NULL_POINTER = 1,
  MLSP_STATUS_INVALID_ARGUMENT = 2,
  MLSP_STATUS_INVALID_INPUT = 3,
  MLSP_STATUS_SIZE_GUARD = 4,
  MLSP_STATUS_IO = 5,
  MLSP_STATUS_UNKNOWN_NODE = 6,
  MLSP_STATUS_BUFFER_TOO_SMALL = 7,
  MLSP_STATUS_INTERNAL = 8,
} MlspStatus;

typedef enum MlspMode {
  MLSP_MODE_COMBINED = 0,
  MLSP_MODE_LAYERS_ONLY = 1,
  MLSP_MODE_DISTANCE_ONLY = 2,
} MlspMode;

typedef enum MlspAlgorithm {
  MLSP_ALGORITHM_DAP = 0,
  MLSP_ALGORITHM_MDA = 1,
} MlspAlgorithm;

typedef enum MlspApspStrategy {
  MLSP_APSP_STRATEGY_FLOYD_WARSHALL = 0,
  MLSP_APSP_STRATEGY_REPEATED_DIJKSTRA = 1,
} MlspApspStrategy;

/**
 * Mutable network under construction.
 */
typedef struct MlspBuilder MlspBuilder;

/**
 * Sealed, immutable network.
 */
typedef struct MlspNetwork MlspNetwork;

/**
 * Single-source shortest path result.
 */
typedef struct MlspPaths MlspPaths;

typedef struct MlspParams {
  uint32_t alpha;
  double beta;
  enum MlspMode mode;
} MlspParams;

typedef struct MlspPathStats {
  uint64_t source;
  uint32_t alpha;
  double beta;
  size_t num_routes;
  double avg_len;
  double min_len;
  double max_len;
  double avg_handshakes;
  size_t num_neighbors;
  double pct_connected;
} MlspPathStats;

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `capacity`). Returns the full message length without the
 * terminator, or 0 if there is no message.
 */
size_t mlsp_last_error_message(char *buf, size_t capacity);

struct MlspBuilder *mlsp_builder_new(enum MlspPolarity polarity);

void mlsp_builder_free(struct MlspBuilder *builder);

enum MlspStatus mlsp_builder_add_layer(struct MlspBuilder *builder,
                                       const char *label,
                                       uint16_t *out_layer);

enum MlspStatus mlsp_builder_add_node(struct MlspBuilder *builder, uint64_t id);

enum MlspStatus mlsp_builder_add_edge(struct MlspBuilder *builder,
                                      uint64_t src,
                                      uint64_t dst,
                                      uint16_t layer,
                                      double weight);

/**
 * Seals the builder into a network. The builder is consumed even on failure.
 */
enum MlspStatus mlsp_builder_seal(struct MlspBuilder *builder, struct MlspNetwork **out_network);

/**
 * Loads a `src,dst,layer,weight` CSV edge list.
 */
enum MlspStatus mlsp_network_load_csv(const char *path,
                                      enum MlspPolarity polarity,
                                      bool keep_max_duplicates,
                                      struct MlspNetwork **out_network);

void mlsp_network_free(struct MlspNetwork *network);

/**
 * Node count, or 0 for a null handle.
 */
size_t mlsp_network_node_count(const struct MlspNetwork *network);

size_t mlsp_network_layer_count(const struct MlspNetwork *network);

/**
 * Total layered edge count, or 0 for a null handle.
 */
size_t mlsp_network_edge_count(const struct MlspNetwork *network);

/**
 * Node ids in ascending order.
 */
enum MlspStatus mlsp_network_node_ids(const struct MlspNetwork *network,
                                      uint64_t *buf,
                                      size_t capacity,
                                      size_t *out_len);

/**
 * Nodes reached from `node` on at least `alpha` layers, ascending.
 */
enum MlspStatus mlsp_network_multi_neighborhood(const struct MlspNetwork *network,
                                                uint64_t node,
                                                uint32_t alpha,
                                                uint64_t *buf,
                                                size_t capacity,
                                                size_t *out_len);

/**
 * Layer-averaged distance between two distinct nodes.
 */
enum MlspStatus mlsp_distance(const struct MlspNetwork *network,
                              uint64_t src,
                              uint64_t dst,
                              double *out_distance);

enum MlspStatus mlsp_sssp(const struct MlspNetwork *network,
                          uint64_t source,
                          const struct MlspParams *params,
                          enum MlspAlgorithm algorithm,
                          struct MlspPaths **out_paths);

void mlsp_paths_free(struct MlspPaths *paths);

/**
 * Shortest length to `target`. Unreachable targets give `false` in
 * `out_reachable` and infinity in `out_length`.
 */
enum MlspStatus mlsp_paths_length(const struct MlspPaths *paths,
                                  uint64_t target,
                                  double *out_length,
                                  bool *out_reachable);

/**
 * Node ids from the source to `target`; empty when unreachable.
 */
enum MlspStatus mlsp_paths_path(const struct MlspPaths *paths,
                                uint64_t target,
                                uint64_t *buf,
                                size_t capacity,
                                size_t *out_len);

/**
 * Route statistics of a result; `network` must be the one it was computed on.
 */
enum MlspStatus mlsp_paths_stats(const struct MlspPaths *paths,
                                 const struct MlspNetwork *network,
                                 struct MlspPathStats *out_stats);

/**
 * All-pairs lengths as a row-major `n x n` matrix over ascending node ids.
 * Unreachable entries are infinity. Refuses networks above `max_nodes`.
 */
enum MlspStatus mlsp_apsp(const struct MlspNetwork *network,
                          const struct MlspParams *params,
                          enum MlspApspStrategy strategy,
                          size_t max_nodes,
                          double *buf,
                          size_t capacity,
                          size_t *out_len);

#endif  /* MLSP_H */
