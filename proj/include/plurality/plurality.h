/* C interface to the plurality-consensus simulator.
 *
 * Every function returning plc_status reports failures through the status
 * code; plc_last_error() gives the message of the most recent failure on
 * the calling thread. Handles are opaque and owned by the caller, who
 * releases them with the matching *_free function. Strings returned
 * through char** out-parameters are released with plc_string_free.
 */
#ifndef PLURALITY_PLURALITY_H
#define PLURALITY_PLURALITY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  if defined(PLURALITY_BUILDING_LIBRARY)
#    define PLC_API __declspec(dllexport)
#  else
#    define PLC_API __declspec(dllimport)
#  endif
#else
#  define PLC_API __attribute__((visibility("default")))
#endif

typedef enum plc_status {
  PLC_OK = 0,
  PLC_ERR_INVALID_ARGUMENT = 1,
  PLC_ERR_GENERATION_FAILURE = 2,
  PLC_ERR_DISCONNECTED_GRAPH = 3,
  PLC_ERR_HORIZON_EXHAUSTED = 4,
  PLC_ERR_THRESHOLD_INVERSION = 5,
  PLC_ERR_IO = 6,
  PLC_ERR_INTERNAL = 99
} plc_status;

PLC_API const char* plc_last_error(void);
PLC_API const char* plc_version(void);
PLC_API void plc_string_free(char* s);

/* ---- graphs ------------------------------------------------------------ */

typedef struct plc_graph plc_graph;

/* kind: complete | cycle | hypercube | random_regular | torus.
 * degree and seed are read for random_regular only. */
PLC_API plc_status plc_graph_build(const char* kind, size_t n, size_t degree, uint64_t seed,
                                   plc_graph** out);
PLC_API plc_status plc_graph_read(const char* path, plc_graph** out);
PLC_API plc_status plc_graph_write(const plc_graph* graph, const char* path);
PLC_API size_t plc_graph_node_count(const plc_graph* graph);
PLC_API size_t plc_graph_edge_count(const plc_graph* graph);
PLC_API plc_status plc_graph_spectral_gap(const plc_graph* graph, double* out);
PLC_API void plc_graph_free(plc_graph* graph);

/* ---- communication patterns ------------------------------------------- */

typedef struct plc_pattern plc_pattern;

/* model: diffusion | random_matching | balancing_circuit | sequential.
 * A balancing circuit built here uses the standard perfect-matching
 * decomposition of the graph's family; see plc_pattern_create_circuit for
 * explicit matchings. */
PLC_API plc_status plc_pattern_create(const plc_graph* graph, const char* model, uint64_t seed,
                                      double matching_probability, plc_pattern** out);
/* Balancing circuit from matching files in edge-list format, used
 * round-robin in the given order. */
PLC_API plc_status plc_pattern_create_circuit(const plc_graph* graph,
                                              const char* const* matching_paths, size_t count,
                                              plc_pattern** out);
PLC_API plc_status plc_pattern_max_active_degree(const plc_pattern* pattern, uint32_t* out);
PLC_API plc_status plc_pattern_active_edges(const plc_pattern* pattern, uint64_t round,
                                            uint32_t* pairs, size_t capacity, size_t* count);
PLC_API plc_status plc_pattern_empirical_pmin(const plc_pattern* pattern, uint64_t samples,
                                              double* out);
PLC_API void plc_pattern_free(plc_pattern* pattern);

/* ---- smoothing --------------------------------------------------------- */

typedef struct plc_mixing_result {
  uint64_t t_mix;
  int estimated; /* nonzero for randomized patterns */
  uint64_t windows;
  double worst_discrepancy;
} plc_mixing_result;

/* epsilon <= 0 selects n^-5. */
PLC_API plc_status plc_mixing_time(const plc_pattern* pattern, double epsilon, uint64_t horizon,
                                   uint64_t trials, plc_mixing_result* out);
PLC_API plc_status plc_window_discrepancy(const plc_pattern* pattern, uint64_t t1, uint64_t t2,
                                          double* out);

/* ---- closed-form quantities --------------------------------------------- */

PLC_API plc_status plc_shuffle_required_gamma(size_t n, double alpha, uint64_t T, double c,
                                              uint32_t delta, uint64_t* out);
PLC_API plc_status plc_shuffle_memory_bits(size_t n, size_t k, double alpha, uint64_t T,
                                           uint64_t t_mix, uint64_t* out);
PLC_API plc_status plc_balance_required_gamma(uint64_t g, double alpha, size_t n, uint64_t* out);
PLC_API plc_status plc_balance_memory_bits(size_t k, uint64_t gamma, uint64_t* out);

/* ---- experiments ------------------------------------------------------- */

typedef struct plc_experiment_config {
  const char* protocol; /* shuffle | balance */
  const char* graph;
  const size_t* sizes;
  size_t size_count;
  size_t degree; /* random_regular */
  const char* model;
  size_t k;
  const uint64_t* counts; /* optional; k entries summing to every size */
  size_t count_len;
  double alpha; /* used when counts is empty */
  uint64_t T;
  uint64_t g;       /* 0: model default */
  double c;
  double epsilon;   /* <= 0: n^-5 */
  double matching_probability;
  uint64_t replicas;
  uint64_t seed;
  uint64_t horizon; /* 0: 64 n log2 n */
  uint64_t mixing_trials;
  unsigned threads; /* 0: hardware concurrency */
} plc_experiment_config;

/* Fills every field with its default (balance on a 16-clique, diffusion). */
PLC_API void plc_experiment_config_init(plc_experiment_config* cfg);

typedef struct plc_sweep plc_sweep;

typedef struct plc_run_record {
  uint64_t seed;
  size_t n;
  size_t k;
  double alpha;
  uint64_t gamma;
  uint64_t t_mix;
  uint64_t rounds;
  int has_consensus;
  uint64_t consensus_round;
  int all_correct;
  uint64_t memory_bits;
  int failed;
} plc_run_record;

PLC_API plc_status plc_sweep_run(const plc_experiment_config* cfg, plc_sweep** out);
PLC_API size_t plc_sweep_record_count(const plc_sweep* sweep);
/* Records are ordered by (sweep point, replica). */
PLC_API plc_status plc_sweep_record(const plc_sweep* sweep, size_t index, plc_run_record* out);
/* path NULL or "-" writes to stdout. */
PLC_API plc_status plc_sweep_write_csv(const plc_sweep* sweep, const char* path);
PLC_API plc_status plc_sweep_summary_json(const plc_sweep* sweep, char** out_json);
PLC_API void plc_sweep_free(plc_sweep* sweep);

/* Scaling report over a CSV written by plc_sweep_write_csv. The config
 * supplies the graph family, degree, T, seed and sizes used for the run. */
PLC_API plc_status plc_scaling_report(const char* csv_path, const plc_experiment_config* cfg,
                                      char** out_json);

/* suite: marginal | negative-association | chernoff | all. */
PLC_API plc_status plc_verify(const char* suite, uint64_t seed, uint64_t samples, int* all_pass,
                              char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* PLURALITY_PLURALITY_H */
