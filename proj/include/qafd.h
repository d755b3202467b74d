/* Copyright 2026 The QAFD Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* qafd.h -- C API for the query-aware flow diffusion library.
 *
 * The library retrieves query-relevant subgraphs from an attributed graph by
 * running a flow diffusion whose edge weights blend structural and semantic
 * similarity against a query embedding. All state lives behind opaque
 * handles; every fallible call returns a qafd_status and leaves a detailed
 * message readable via qafd_last_error() on the calling thread.
 *
 * Handles returned through an out-parameter are owned by the caller and must
 * be released with the matching *_free function. Pointers returned by
 * accessor functions borrow from their handle and stay valid until the
 * handle is freed.
 */

#ifndef QAFD_H
#define QAFD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QAFD_API __declspec(dllexport)
#else
#define QAFD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ---------------------------------------------------------------------- */
/* Status codes                                                            */
/* ---------------------------------------------------------------------- */

typedef enum qafd_status {
  QAFD_OK = 0,
  QAFD_ERROR_INVALID_ARGUMENT = 1,
  QAFD_ERROR_DIMENSION_MISMATCH = 2,
  QAFD_ERROR_SELF_LOOP = 3,
  QAFD_ERROR_DUPLICATE_EDGE = 4,
  QAFD_ERROR_DANGLING_ENDPOINT = 5,
  QAFD_ERROR_UNKNOWN_NODE = 6,
  QAFD_ERROR_NOT_AN_EDGE = 7,
  QAFD_ERROR_NO_SEEDS = 8,
  QAFD_ERROR_EMPTY_GRAPH = 9,
  QAFD_ERROR_EMPTY_RETRIEVAL = 10,
  QAFD_ERROR_PARSE = 11,
  QAFD_ERROR_IO = 12,
  QAFD_ERROR_MISSING_EMBEDDING = 13,
  QAFD_ERROR_NO_PROGRESS = 14,
  QAFD_ERROR_TOO_LARGE = 15,
  QAFD_ERROR_INTERNAL = 16
} qafd_status;

/* Stable identifier for a status value, e.g. "dimension_mismatch". */
QAFD_API const char* qafd_status_name(qafd_status status);

/* Detail message for the most recent failing call on this thread. */
QAFD_API const char* qafd_last_error(void);

QAFD_API const char* qafd_version(void);

/* ---------------------------------------------------------------------- */
/* Opaque handles                                                          */
/* ---------------------------------------------------------------------- */

typedef struct qafd_graph qafd_graph;
typedef struct qafd_embeddings qafd_embeddings;
typedef struct qafd_result qafd_result;
typedef struct qafd_retrieval qafd_retrieval;
typedef struct qafd_oracle_report qafd_oracle_report;
typedef struct qafd_recovery_summary qafd_recovery_summary;

/* ---------------------------------------------------------------------- */
/* Graph                                                                   */
/* ---------------------------------------------------------------------- */

/* Builds an immutable undirected graph. `embeddings` is row-major
 * node_count x dim. `base_weights` may be NULL (all edges weight 1).
 * Rejects self-loops, duplicate edges and out-of-range endpoints. */
QAFD_API qafd_status qafd_graph_create(const char* const* labels,
                                       const double* embeddings,
                                       size_t node_count, size_t dim,
                                       const uint32_t* edge_u,
                                       const uint32_t* edge_v,
                                       const double* base_weights,
                                       size_t edge_count, qafd_graph** out);

/* Loads a graph from tab-separated node and edge files. Node lines are
 * `label<TAB>v1,...,vd` or bare `label` when `embeddings_path` supplies the
 * vectors keyed by label. Edge lines are `label_u<TAB>label_v[<TAB>w]`. */
QAFD_API qafd_status qafd_graph_load(const char* nodes_path,
                                     const char* edges_path,
                                     const char* embeddings_path,
                                     qafd_graph** out);

/* Writes the graph back out in the same text formats. */
QAFD_API qafd_status qafd_graph_save(const qafd_graph* g,
                                     const char* nodes_path,
                                     const char* edges_path);

QAFD_API void qafd_graph_free(qafd_graph* g);

QAFD_API size_t qafd_graph_node_count(const qafd_graph* g);
QAFD_API size_t qafd_graph_edge_count(const qafd_graph* g);
QAFD_API size_t qafd_graph_dim(const qafd_graph* g);
QAFD_API size_t qafd_graph_degree(const qafd_graph* g, uint32_t node);
QAFD_API size_t qafd_graph_max_degree(const qafd_graph* g);
QAFD_API const char* qafd_graph_label(const qafd_graph* g, uint32_t node);
QAFD_API const double* qafd_graph_embedding(const qafd_graph* g,
                                            uint32_t node);
QAFD_API qafd_status qafd_graph_edge(const qafd_graph* g, size_t index,
                                     uint32_t* u, uint32_t* v,
                                     double* base_weight);

/* ---------------------------------------------------------------------- */
/* Embedding tables                                                        */
/* ---------------------------------------------------------------------- */

/* File format: one record per line, `key<TAB>v1,v2,...,vd`. */
QAFD_API qafd_status qafd_embeddings_load(const char* path,
                                          qafd_embeddings** out);
QAFD_API void qafd_embeddings_free(qafd_embeddings* e);
QAFD_API size_t qafd_embeddings_dim(const qafd_embeddings* e);
QAFD_API size_t qafd_embeddings_count(const qafd_embeddings* e);
/* Returns a borrowed pointer to the vector for `key`, or NULL if absent. */
QAFD_API const double* qafd_embeddings_lookup(const qafd_embeddings* e,
                                              const char* key);

/* ---------------------------------------------------------------------- */
/* Similarity and edge-weight schemes                                      */
/* ---------------------------------------------------------------------- */

typedef enum qafd_sim_kind {
  QAFD_SIM_COSINE = 0,
  QAFD_SIM_DOT = 1,
  QAFD_SIM_RBF = 2 /* exp(-gamma * ||a - b||^2) */
} qafd_sim_kind;

typedef struct qafd_similarity {
  qafd_sim_kind kind;
  double gamma; /* RBF bandwidth; ignored for cosine/dot */
} qafd_similarity;

QAFD_API qafd_status qafd_similarity_eval(qafd_similarity sim,
                                          const double* a, const double* b,
                                          size_t dim, double* out);

typedef enum qafd_scheme_kind {
  QAFD_SCHEME_MEAN = 0,    /* (s_uv + s_uq + s_vq) / 3                   */
  QAFD_SCHEME_PRODUCT = 1, /* s_uv * s_uq * s_vq                         */
  QAFD_SCHEME_HYBRID = 2,  /* s_uv * (a + b * (s_uq + s_vq))             */
  QAFD_SCHEME_GENERIC = 3  /* (c * s_uv) o (a + b * (s_uq o s_vq))       */
} qafd_scheme_kind;

typedef enum qafd_combine { QAFD_COMBINE_ADD = 0, QAFD_COMBINE_MUL = 1 } qafd_combine;

typedef struct qafd_weight_params {
  qafd_scheme_kind scheme;
  double a, b, c;       /* generic/hybrid coefficients, all >= 0 */
  qafd_combine combine; /* generic scheme only */
  qafd_similarity node_node_sim;
  qafd_similarity node_query_sim;
  /* Nonzero selects per-factor RBF similarities with bandwidths gamma1..3
   * (node-node, lower-id-node-query, higher-id-node-query). */
  int use_product_bandwidths;
  double gamma1, gamma2, gamma3;
  /* Computed weights are clamped below by this strictly positive floor. */
  double floor_weight;
} qafd_weight_params;

/* Defaults: hybrid scheme with a=1, b=0.25, cosine similarities,
 * floor 1e-10. */
QAFD_API void qafd_weight_params_init(qafd_weight_params* wp);

/* Evaluates the query-aware weight of one existing edge. */
QAFD_API qafd_status qafd_edge_weight(const qafd_graph* g,
                                      const qafd_weight_params* wp,
                                      const double* query_embedding,
                                      uint32_t u, uint32_t v, double* out);

/* ---------------------------------------------------------------------- */
/* Seed selection                                                          */
/* ---------------------------------------------------------------------- */

/* score(v) = max over keywords of sim(keyword_embedding, node_embedding).
 * `keyword_embeddings` is row-major keyword_count x dim. `out_scores` must
 * hold node_count doubles. `out_eval_count`, when non-NULL, receives the
 * number of similarity evaluations performed. */
QAFD_API qafd_status qafd_score_nodes(const qafd_graph* g,
                                      const double* keyword_embeddings,
                                      size_t keyword_count,
                                      qafd_similarity sim,
                                      double* out_scores,
                                      uint64_t* out_eval_count);

/* Picks the num_seeds highest scores, ties broken by ascending node id.
 * `out_ids` must hold num_seeds entries; `out_seed_scores` may be NULL. */
QAFD_API qafd_status qafd_select_seeds(const double* scores,
                                       size_t node_count, size_t num_seeds,
                                       uint32_t* out_ids,
                                       double* out_seed_scores);

/* ---------------------------------------------------------------------- */
/* Diffusion                                                               */
/* ---------------------------------------------------------------------- */

typedef enum qafd_sink_mode {
  QAFD_SINK_DEGREE = 0,  /* T_v = degree(v)        */
  QAFD_SINK_UNIFORM = 1, /* T_v = uniform_capacity */
  QAFD_SINK_EXPLICIT = 2
} qafd_sink_mode;

typedef enum qafd_source_mode {
  QAFD_SOURCE_ALPHA_TOTAL_SINK = 0, /* each seed gets alpha * sum(T)       */
  QAFD_SOURCE_EXPLICIT = 1,
  QAFD_SOURCE_RECOVERY_MASS = 2 /* seeds share (1+beta) * target_total */
} qafd_source_mode;

typedef enum qafd_selection {
  QAFD_SELECT_UNIFORM_RANDOM = 0, /* seeded PRNG over the active set */
  QAFD_SELECT_FIFO = 1
} qafd_selection;

typedef enum qafd_trace_mode {
  QAFD_TRACE_NONE = 0,
  QAFD_TRACE_CADENCE = 1,
  QAFD_TRACE_EVERY_PUSH = 2
} qafd_trace_mode;

typedef struct qafd_diffusion_params {
  double alpha;
  qafd_sink_mode sink_mode;
  double uniform_capacity;
  const double* explicit_sinks; /* node_count entries when EXPLICIT */
  qafd_source_mode source_mode;
  const double* explicit_sources; /* node_count entries when EXPLICIT */
  double recovery_beta;
  double recovery_target_total;
  double epsilon;           /* stop when total excess mass <= epsilon */
  uint64_t max_iterations;  /* hard cap on pushes */
  uint64_t check_cadence;   /* convergence checked every this many pushes */
  qafd_selection selection;
  uint64_t rng_seed;
  double support_threshold; /* nodes with x above this form the support */
  qafd_trace_mode trace;
} qafd_diffusion_params;

/* Defaults: alpha 50, degree sinks, alpha-times-total-sink sources,
 * epsilon 0.05, cap 1e6, cadence 100, uniform-random selection, seed 0,
 * support threshold 1e-8, cadence tracing. */
QAFD_API void qafd_diffusion_params_init(qafd_diffusion_params* dp);

/* Runs the push-based diffusion from `seeds` (ignored when the source mode
 * is EXPLICIT). `query_embedding` must have the graph's dimension. */
QAFD_API qafd_status qafd_diffuse(const qafd_graph* g,
                                  const qafd_weight_params* wp,
                                  const double* query_embedding,
                                  const uint32_t* seeds, size_t seed_count,
                                  const qafd_diffusion_params* dp,
                                  qafd_result** out);

QAFD_API void qafd_result_free(qafd_result* r);
QAFD_API size_t qafd_result_node_count(const qafd_result* r);
QAFD_API const double* qafd_result_x(const qafd_result* r);
QAFD_API const double* qafd_result_mass(const qafd_result* r);
QAFD_API const double* qafd_result_sinks(const qafd_result* r);
QAFD_API const double* qafd_result_sources(const qafd_result* r);
QAFD_API size_t qafd_result_support_count(const qafd_result* r);
QAFD_API const uint32_t* qafd_result_support(const qafd_result* r);
QAFD_API uint64_t qafd_result_iterations(const qafd_result* r);
QAFD_API int qafd_result_converged(const qafd_result* r);
QAFD_API double qafd_result_final_excess(const qafd_result* r);
QAFD_API double qafd_result_objective(const qafd_result* r);
QAFD_API double qafd_result_gamma_hat(const qafd_result* r);
QAFD_API double qafd_result_eta_hat(const qafd_result* r);
QAFD_API size_t qafd_result_trace_count(const qafd_result* r);
QAFD_API qafd_status qafd_result_trace_entry(const qafd_result* r, size_t i,
                                             uint64_t* iteration,
                                             double* objective,
                                             double* total_excess);
/* Implied nonzero edge flows, oriented from the lower to the higher id. */
QAFD_API size_t qafd_result_flow_count(const qafd_result* r);
QAFD_API qafd_status qafd_result_flow_entry(const qafd_result* r, size_t i,
                                            uint32_t* u, uint32_t* v,
                                            double* flow);
/* Nodes that kept excess mass because they have no neighbors. */
QAFD_API size_t qafd_result_absorbed_count(const qafd_result* r);
QAFD_API const uint32_t* qafd_result_absorbed(const qafd_result* r);

/* ---------------------------------------------------------------------- */
/* Multi-subquery retrieval                                                */
/* ---------------------------------------------------------------------- */

/* Runs one diffusion per subquery (seeds re-selected against each subquery
 * embedding), thresholds each support, and unions the induced subgraphs.
 * `subquery_embeddings` is row-major subquery_count x dim. Node scores
 * aggregate across subqueries by coordinatewise max, or sum when
 * `aggregate_sum` is nonzero. Fails with QAFD_ERROR_EMPTY_RETRIEVAL when
 * every support is empty. */
QAFD_API qafd_status qafd_retrieve(const qafd_graph* g,
                                   const qafd_weight_params* wp,
                                   const double* subquery_embeddings,
                                   size_t subquery_count, size_t num_seeds,
                                   qafd_similarity seed_sim,
                                   const qafd_diffusion_params* dp,
                                   int aggregate_sum, qafd_retrieval** out);

QAFD_API void qafd_retrieval_free(qafd_retrieval* r);
QAFD_API size_t qafd_retrieval_subquery_count(const qafd_retrieval* r);
/* Nodes are ordered by descending score, ties by ascending original id. */
QAFD_API size_t qafd_retrieval_node_count(const qafd_retrieval* r);
QAFD_API qafd_status qafd_retrieval_node(const qafd_retrieval* r, size_t i,
                                         uint32_t* original_id,
                                         double* score);
QAFD_API const char* qafd_retrieval_node_label(const qafd_retrieval* r,
                                               size_t i);
QAFD_API size_t qafd_retrieval_node_subquery_count(const qafd_retrieval* r,
                                                   size_t i);
QAFD_API qafd_status qafd_retrieval_node_subquery(const qafd_retrieval* r,
                                                  size_t i, size_t j,
                                                  size_t* subquery_index);
/* Union edges with original endpoint ids and the largest realized
 * query-aware weight among contributing subqueries. */
QAFD_API size_t qafd_retrieval_edge_count(const qafd_retrieval* r);
QAFD_API qafd_status qafd_retrieval_edge(const qafd_retrieval* r, size_t i,
                                         uint32_t* u, uint32_t* v,
                                         double* weight);
QAFD_API qafd_status qafd_retrieval_report(const qafd_retrieval* r, size_t k,
                                           uint64_t* iterations,
                                           int* converged,
                                           double* final_excess);

/* ---------------------------------------------------------------------- */
/* Reference-solver comparison suite                                       */
/* ---------------------------------------------------------------------- */

typedef struct qafd_oracle_check_params {
  uint32_t instances;
  uint64_t seed;
  double objective_tolerance; /* pass when |F_diff - F_oracle| within it */
  double diffusion_epsilon;   /* tightened stopping threshold            */
  uint32_t min_nodes, max_nodes;
} qafd_oracle_check_params;

/* Defaults: 100 instances, seed 20260809, tolerance 1e-6, epsilon 1e-8,
 * node range [5, 50]. */
QAFD_API void qafd_oracle_check_params_init(qafd_oracle_check_params* p);

/* Generates seeded random instances, solves each with both the diffusion
 * solver and the dense reference solver, and records the comparison. */
QAFD_API qafd_status qafd_oracle_check_run(const qafd_oracle_check_params* p,
                                           qafd_oracle_report** out);

QAFD_API void qafd_oracle_report_free(qafd_oracle_report* r);
QAFD_API size_t qafd_oracle_report_count(const qafd_oracle_report* r);
QAFD_API qafd_status qafd_oracle_report_row(const qafd_oracle_report* r,
                                            size_t i, uint64_t* instance_seed,
                                            uint32_t* nodes,
                                            double* objective_solver,
                                            double* objective_oracle,
                                            double* abs_diff, int* pass);
QAFD_API int qafd_oracle_report_all_pass(const qafd_oracle_report* r);

/* ---------------------------------------------------------------------- */
/* Synthetic recovery experiments                                          */
/* ---------------------------------------------------------------------- */

typedef struct qafd_synth_params {
  uint32_t n;         /* total nodes                                   */
  uint32_t r_k;       /* planted relevant-set size                     */
  double rho1;        /* edge probability within the planted set       */
  double rho2;        /* edge probability across the boundary          */
  double background;  /* edge probability among irrelevant pairs       */
  uint32_t d;         /* embedding dimension                           */
  double mu_gap;      /* distance from planted mean to irrelevant means */
  double sigma;       /* per-coordinate Gaussian noise scale           */
  double gamma1, gamma2, gamma3; /* RBF bandwidths for the product weight */
  double beta;        /* leakage budget in the source-mass rule        */
  uint64_t seed;
} qafd_synth_params;

/* Defaults: the desk-scale regime used by the acceptance experiments
 * (n=200, r_k=10, rho1=0.6, rho2=0.05, background=0.02, d=32, mu_gap=4,
 * sigma=0.025, gamma=0.5, beta=0.5). */
QAFD_API void qafd_synth_params_init(qafd_synth_params* p);

/* Runs `trials` independent planted-recovery trials. `dp` may be NULL for
 * the suite defaults (degree sinks, recovery-mass sources). `threads` 0
 * means one worker per hardware thread; results are identical for any
 * thread count. */
QAFD_API qafd_status qafd_recovery_suite_run(const qafd_synth_params* sp,
                                             const qafd_diffusion_params* dp,
                                             uint32_t trials,
                                             uint32_t threads,
                                             qafd_recovery_summary** out);

QAFD_API void qafd_recovery_summary_free(qafd_recovery_summary* s);
QAFD_API uint32_t qafd_recovery_summary_trials(const qafd_recovery_summary* s);
QAFD_API qafd_status qafd_recovery_summary_trial(
    const qafd_recovery_summary* s, uint32_t i, uint64_t* trial_seed,
    int* full_recovery, double* leakage_ratio, uint32_t* support_size,
    int* plant_connected, int* converged);
QAFD_API double qafd_recovery_summary_recovery_rate(
    const qafd_recovery_summary* s);
QAFD_API double qafd_recovery_summary_leakage_ok_rate(
    const qafd_recovery_summary* s);
QAFD_API double qafd_recovery_summary_leakage_quantile(
    const qafd_recovery_summary* s, double q);
QAFD_API double qafd_recovery_summary_median_within_weight(
    const qafd_recovery_summary* s);
QAFD_API double qafd_recovery_summary_median_boundary_weight(
    const qafd_recovery_summary* s);
QAFD_API double qafd_recovery_summary_connected_rate(
    const qafd_recovery_summary* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QAFD_H */
