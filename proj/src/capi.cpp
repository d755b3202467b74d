// Copyright 2026 The QAFD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qafd.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "diffusion.hpp"
#include "embedding.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "paircheck.hpp"
#include "random.hpp"
#include "retrieval.hpp"
#include "seeding.hpp"
#include "synth.hpp"
#include "weighting.hpp"

using namespace qafd;

namespace {

thread_local std::string g_last_error;

qafd_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return QAFD_ERROR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return QAFD_ERROR_DIMENSION_MISMATCH;
    case ErrorCode::SelfLoop: return QAFD_ERROR_SELF_LOOP;
    case ErrorCode::DuplicateEdge: return QAFD_ERROR_DUPLICATE_EDGE;
    case ErrorCode::DanglingEndpoint: return QAFD_ERROR_DANGLING_ENDPOINT;
    case ErrorCode::UnknownNode: return QAFD_ERROR_UNKNOWN_NODE;
    case ErrorCode::NotAnEdge: return QAFD_ERROR_NOT_AN_EDGE;
    case ErrorCode::NoSeeds: return QAFD_ERROR_NO_SEEDS;
    case ErrorCode::EmptyGraph: return QAFD_ERROR_EMPTY_GRAPH;
    case ErrorCode::EmptyRetrieval: return QAFD_ERROR_EMPTY_RETRIEVAL;
    case ErrorCode::Parse: return QAFD_ERROR_PARSE;
    case ErrorCode::Io: return QAFD_ERROR_IO;
    case ErrorCode::MissingEmbedding: return QAFD_ERROR_MISSING_EMBEDDING;
    case ErrorCode::NoProgress: return QAFD_ERROR_NO_PROGRESS;
    case ErrorCode::TooLarge: return QAFD_ERROR_TOO_LARGE;
    case ErrorCode::Internal: return QAFD_ERROR_INTERNAL;
  }
  return QAFD_ERROR_INTERNAL;
}

template <typename F>
qafd_status guarded(F&& fn) {
  try {
    fn();
    return QAFD_OK;
  } catch (const Error& err) {
    g_last_error = err.what();
    return to_status(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return QAFD_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QAFD_ERROR_INTERNAL;
  }
}

qafd_status arg_error(const std::string& message) {
  g_last_error = message;
  return QAFD_ERROR_INVALID_ARGUMENT;
}

SimilarityKind to_sim(qafd_similarity sim) {
  switch (sim.kind) {
    case QAFD_SIM_COSINE: return SimilarityKind::cosine();
    case QAFD_SIM_DOT: return SimilarityKind::dot();
    case QAFD_SIM_RBF: return SimilarityKind::rbf(sim.gamma);
  }
  raise(ErrorCode::InvalidArgument, "unknown similarity kind");
}

WeightScheme to_scheme(const qafd_weight_params& wp) {
  WeightScheme s;
  switch (wp.scheme) {
    case QAFD_SCHEME_MEAN: s.variant = WeightScheme::Variant::Mean; break;
    case QAFD_SCHEME_PRODUCT:
      s.variant = WeightScheme::Variant::Product;
      break;
    case QAFD_SCHEME_HYBRID: s.variant = WeightScheme::Variant::Hybrid; break;
    case QAFD_SCHEME_GENERIC:
      s.variant = WeightScheme::Variant::Generic;
      break;
    default: raise(ErrorCode::InvalidArgument, "unknown scheme kind");
  }
  s.a = wp.a;
  s.b = wp.b;
  s.c = wp.c;
  s.combine = wp.combine == QAFD_COMBINE_ADD ? Combine::Add : Combine::Mul;
  s.node_node_sim = to_sim(wp.node_node_sim);
  s.node_query_sim = to_sim(wp.node_query_sim);
  if (wp.use_product_bandwidths) {
    s.product_bandwidths =
        ProductBandwidths{wp.gamma1, wp.gamma2, wp.gamma3};
  }
  s.floor = wp.floor_weight;
  s.validate();
  return s;
}

DiffusionConfig to_config(const qafd_diffusion_params& dp, std::size_t n) {
  DiffusionConfig cfg;
  cfg.alpha = dp.alpha;
  switch (dp.sink_mode) {
    case QAFD_SINK_DEGREE: cfg.sink_mode = DiffusionConfig::Sink::Degree; break;
    case QAFD_SINK_UNIFORM:
      cfg.sink_mode = DiffusionConfig::Sink::Uniform;
      break;
    case QAFD_SINK_EXPLICIT:
      cfg.sink_mode = DiffusionConfig::Sink::Explicit;
      if (dp.explicit_sinks == nullptr) {
        raise(ErrorCode::InvalidArgument, "explicit sinks are null");
      }
      cfg.explicit_sinks.assign(dp.explicit_sinks, dp.explicit_sinks + n);
      break;
    default: raise(ErrorCode::InvalidArgument, "unknown sink mode");
  }
  cfg.uniform_capacity = dp.uniform_capacity;
  switch (dp.source_mode) {
    case QAFD_SOURCE_ALPHA_TOTAL_SINK:
      cfg.source_mode = DiffusionConfig::Source::AlphaTimesTotalSink;
      break;
    case QAFD_SOURCE_EXPLICIT:
      cfg.source_mode = DiffusionConfig::Source::Explicit;
      if (dp.explicit_sources == nullptr) {
        raise(ErrorCode::InvalidArgument, "explicit sources are null");
      }
      cfg.explicit_sources.assign(dp.explicit_sources,
                                  dp.explicit_sources + n);
      break;
    case QAFD_SOURCE_RECOVERY_MASS:
      cfg.source_mode = DiffusionConfig::Source::RecoveryMass;
      break;
    default: raise(ErrorCode::InvalidArgument, "unknown source mode");
  }
  cfg.recovery_beta = dp.recovery_beta;
  cfg.recovery_target_total = dp.recovery_target_total;
  cfg.epsilon = dp.epsilon;
  cfg.max_iterations = dp.max_iterations;
  cfg.check_cadence = dp.check_cadence;
  cfg.selection = dp.selection == QAFD_SELECT_FIFO
                      ? DiffusionConfig::Selection::Fifo
                      : DiffusionConfig::Selection::UniformRandom;
  cfg.rng_seed = dp.rng_seed;
  cfg.support_threshold = dp.support_threshold;
  switch (dp.trace) {
    case QAFD_TRACE_NONE: cfg.trace = DiffusionConfig::Trace::None; break;
    case QAFD_TRACE_CADENCE:
      cfg.trace = DiffusionConfig::Trace::Cadence;
      break;
    case QAFD_TRACE_EVERY_PUSH:
      cfg.trace = DiffusionConfig::Trace::EveryPush;
      break;
    default: raise(ErrorCode::InvalidArgument, "unknown trace mode");
  }
  return cfg;
}

}  // namespace

struct qafd_graph {
  Graph graph;
};

struct qafd_embeddings {
  EmbeddingTable table;
};

struct qafd_result {
  DiffusionResult result;
  double objective = 0.0;
  std::vector<EdgeFlow> flows;
};

struct qafd_retrieval {
  RetrievedSubgraph retrieved;
  /// Ranked view: (original id, score) plus label/provenance parallel data.
  std::vector<std::pair<NodeId, double>> ranked;
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> provenance;
  std::size_t subqueries = 0;
};

struct qafd_oracle_report {
  std::vector<PairedRun> rows;
  double tolerance = 0.0;
};

struct qafd_recovery_summary {
  RecoverySummary summary;
};

extern "C" {

const char* qafd_status_name(qafd_status status) {
  switch (status) {
    case QAFD_OK: return "ok";
    case QAFD_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case QAFD_ERROR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case QAFD_ERROR_SELF_LOOP: return "self_loop";
    case QAFD_ERROR_DUPLICATE_EDGE: return "duplicate_edge";
    case QAFD_ERROR_DANGLING_ENDPOINT: return "dangling_endpoint";
    case QAFD_ERROR_UNKNOWN_NODE: return "unknown_node";
    case QAFD_ERROR_NOT_AN_EDGE: return "not_an_edge";
    case QAFD_ERROR_NO_SEEDS: return "no_seeds";
    case QAFD_ERROR_EMPTY_GRAPH: return "empty_graph";
    case QAFD_ERROR_EMPTY_RETRIEVAL: return "empty_retrieval";
    case QAFD_ERROR_PARSE: return "parse_error";
    case QAFD_ERROR_IO: return "io_error";
    case QAFD_ERROR_MISSING_EMBEDDING: return "missing_embedding";
    case QAFD_ERROR_NO_PROGRESS: return "no_progress";
    case QAFD_ERROR_TOO_LARGE: return "too_large";
    case QAFD_ERROR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* qafd_last_error(void) { return g_last_error.c_str(); }

const char* qafd_version(void) { return "0.1.0"; }

/* ------------------------------ graph -------------------------------- */

qafd_status qafd_graph_create(const char* const* labels,
                              const double* embeddings, size_t node_count,
                              size_t dim, const uint32_t* edge_u,
                              const uint32_t* edge_v,
                              const double* base_weights, size_t edge_count,
                              qafd_graph** out) {
  if (out == nullptr) return arg_error("out pointer is null");
  if (node_count > 0 && (labels == nullptr || embeddings == nullptr)) {
    return arg_error("labels/embeddings are null");
  }
  if (edge_count > 0 && (edge_u == nullptr || edge_v == nullptr)) {
    return arg_error("edge arrays are null");
  }
  return guarded([&] {
    std::vector<Node> nodes(node_count);
    for (size_t i = 0; i < node_count; ++i) {
      nodes[i].id = static_cast<NodeId>(i);
      nodes[i].label = labels[i] != nullptr ? labels[i] : "";
      nodes[i].embedding.assign(embeddings + i * dim,
                                embeddings + (i + 1) * dim);
    }
    std::vector<Edge> edges(edge_count);
    for (size_t i = 0; i < edge_count; ++i) {
      edges[i].u = edge_u[i];
      edges[i].v = edge_v[i];
      edges[i].base_weight = base_weights != nullptr ? base_weights[i] : 1.0;
    }
    *out = new qafd_graph{Graph::build(std::move(nodes), std::move(edges))};
  });
}

qafd_status qafd_graph_load(const char* nodes_path, const char* edges_path,
                            const char* embeddings_path, qafd_graph** out) {
  if (out == nullptr || nodes_path == nullptr || edges_path == nullptr) {
    return arg_error("null path argument");
  }
  return guarded([&] {
    if (embeddings_path != nullptr) {
      EmbeddingTable table = load_embeddings(embeddings_path);
      *out = new qafd_graph{load_graph(nodes_path, edges_path, &table)};
    } else {
      *out = new qafd_graph{load_graph(nodes_path, edges_path)};
    }
  });
}

qafd_status qafd_graph_save(const qafd_graph* g, const char* nodes_path,
                            const char* edges_path) {
  if (g == nullptr || nodes_path == nullptr || edges_path == nullptr) {
    return arg_error("null argument");
  }
  return guarded([&] { save_graph(g->graph, nodes_path, edges_path); });
}

void qafd_graph_free(qafd_graph* g) { delete g; }

size_t qafd_graph_node_count(const qafd_graph* g) {
  return g != nullptr ? g->graph.node_count() : 0;
}

size_t qafd_graph_edge_count(const qafd_graph* g) {
  return g != nullptr ? g->graph.edge_count() : 0;
}

size_t qafd_graph_dim(const qafd_graph* g) {
  return g != nullptr ? g->graph.dim() : 0;
}

size_t qafd_graph_degree(const qafd_graph* g, uint32_t node) {
  if (g == nullptr || node >= g->graph.node_count()) return 0;
  return g->graph.degree(node);
}

size_t qafd_graph_max_degree(const qafd_graph* g) {
  return g != nullptr ? g->graph.max_degree() : 0;
}

const char* qafd_graph_label(const qafd_graph* g, uint32_t node) {
  if (g == nullptr || node >= g->graph.node_count()) return nullptr;
  return g->graph.node(node).label.c_str();
}

const double* qafd_graph_embedding(const qafd_graph* g, uint32_t node) {
  if (g == nullptr || node >= g->graph.node_count()) return nullptr;
  return g->graph.node(node).embedding.data();
}

qafd_status qafd_graph_edge(const qafd_graph* g, size_t index, uint32_t* u,
                            uint32_t* v, double* base_weight) {
  if (g == nullptr || index >= g->graph.edge_count()) {
    return arg_error("edge index out of range");
  }
  const Edge& e = g->graph.edge(index);
  if (u != nullptr) *u = e.u;
  if (v != nullptr) *v = e.v;
  if (base_weight != nullptr) *base_weight = e.base_weight;
  return QAFD_OK;
}

/* ---------------------------- embeddings ------------------------------ */

qafd_status qafd_embeddings_load(const char* path, qafd_embeddings** out) {
  if (path == nullptr || out == nullptr) return arg_error("null argument");
  return guarded([&] { *out = new qafd_embeddings{load_embeddings(path)}; });
}

void qafd_embeddings_free(qafd_embeddings* e) { delete e; }

size_t qafd_embeddings_dim(const qafd_embeddings* e) {
  return e != nullptr ? e->table.dim() : 0;
}

size_t qafd_embeddings_count(const qafd_embeddings* e) {
  return e != nullptr ? e->table.size() : 0;
}

const double* qafd_embeddings_lookup(const qafd_embeddings* e,
                                     const char* key) {
  if (e == nullptr || key == nullptr) return nullptr;
  const std::vector<double>* vec = e->table.find(key);
  return vec != nullptr ? vec->data() : nullptr;
}

/* ------------------------- weights & similarity ----------------------- */

qafd_status qafd_similarity_eval(qafd_similarity sim, const double* a,
                                 const double* b, size_t dim, double* out) {
  if (a == nullptr || b == nullptr || out == nullptr) {
    return arg_error("null argument");
  }
  return guarded([&] {
    *out = similarity(to_sim(sim), std::span<const double>(a, dim),
                      std::span<const double>(b, dim));
  });
}

void qafd_weight_params_init(qafd_weight_params* wp) {
  if (wp == nullptr) return;
  std::memset(wp, 0, sizeof(*wp));
  wp->scheme = QAFD_SCHEME_HYBRID;
  wp->a = 1.0;
  wp->b = 0.25;
  wp->c = 1.0;
  wp->combine = QAFD_COMBINE_MUL;
  wp->node_node_sim = {QAFD_SIM_COSINE, 1.0};
  wp->node_query_sim = {QAFD_SIM_COSINE, 1.0};
  wp->use_product_bandwidths = 0;
  wp->gamma1 = wp->gamma2 = wp->gamma3 = 1.0;
  wp->floor_weight = 1e-10;
}

qafd_status qafd_edge_weight(const qafd_graph* g,
                             const qafd_weight_params* wp,
                             const double* query_embedding, uint32_t u,
                             uint32_t v, double* out) {
  if (g == nullptr || wp == nullptr || query_embedding == nullptr ||
      out == nullptr) {
    return arg_error("null argument");
  }
  return guarded([&] {
    std::vector<double> query(query_embedding,
                              query_embedding + g->graph.dim());
    QueryContext ctx(g->graph, to_scheme(*wp), std::move(query));
    *out = edge_weight(ctx, u, v);
  });
}

/* ------------------------------ seeding ------------------------------- */

qafd_status qafd_score_nodes(const qafd_graph* g,
                             const double* keyword_embeddings,
                             size_t keyword_count, qafd_similarity sim,
                             double* out_scores, uint64_t* out_eval_count) {
  if (g == nullptr || keyword_embeddings == nullptr || out_scores == nullptr) {
    return arg_error("null argument");
  }
  return guarded([&] {
    const size_t dim = g->graph.dim();
    KeywordSet kw;
    for (size_t i = 0; i < keyword_count; ++i) {
      kw.keywords.push_back("k" + std::to_string(i));
      kw.embeddings.emplace_back(keyword_embeddings + i * dim,
                                 keyword_embeddings + (i + 1) * dim);
    }
    NodeScores scored = score_nodes(g->graph, kw, to_sim(sim));
    std::copy(scored.scores.begin(), scored.scores.end(), out_scores);
    if (out_eval_count != nullptr) *out_eval_count = scored.evaluations;
  });
}

qafd_status qafd_select_seeds(const double* scores, size_t node_count,
                              size_t num_seeds, uint32_t* out_ids,
                              double* out_seed_scores) {
  if (scores == nullptr || out_ids == nullptr) {
    return arg_error("null argument");
  }
  return guarded([&] {
    SeedSelection sel = select_seeds(
        std::vector<double>(scores, scores + node_count), num_seeds);
    for (size_t i = 0; i < sel.seeds.size(); ++i) {
      out_ids[i] = sel.seeds[i];
      if (out_seed_scores != nullptr) {
        out_seed_scores[i] = sel.scores[sel.seeds[i]];
      }
    }
  });
}

/* ----------------------------- diffusion ------------------------------ */

void qafd_diffusion_params_init(qafd_diffusion_params* dp) {
  if (dp == nullptr) return;
  std::memset(dp, 0, sizeof(*dp));
  dp->alpha = 50.0;
  dp->sink_mode = QAFD_SINK_DEGREE;
  dp->uniform_capacity = 1.0;
  dp->explicit_sinks = nullptr;
  dp->source_mode = QAFD_SOURCE_ALPHA_TOTAL_SINK;
  dp->explicit_sources = nullptr;
  dp->recovery_beta = 0.5;
  dp->recovery_target_total = 0.0;
  dp->epsilon = 0.05;
  dp->max_iterations = 1000000;
  dp->check_cadence = 100;
  dp->selection = QAFD_SELECT_UNIFORM_RANDOM;
  dp->rng_seed = 0;
  dp->support_threshold = 1e-8;
  dp->trace = QAFD_TRACE_CADENCE;
}

qafd_status qafd_diffuse(const qafd_graph* g, const qafd_weight_params* wp,
                         const double* query_embedding, const uint32_t* seeds,
                         size_t seed_count, const qafd_diffusion_params* dp,
                         qafd_result** out) {
  if (g == nullptr || wp == nullptr || query_embedding == nullptr ||
      dp == nullptr || out == nullptr) {
    return arg_error("null argument");
  }
  if (seed_count > 0 && seeds == nullptr) {
    return arg_error("seed array is null");
  }
  return guarded([&] {
    std::vector<double> query(query_embedding,
                              query_embedding + g->graph.dim());
    QueryContext ctx(g->graph, to_scheme(*wp), std::move(query));
    const DiffusionConfig cfg = to_config(*dp, g->graph.node_count());
    std::vector<NodeId> seed_vec(seeds, seeds + seed_count);
    auto holder = std::make_unique<qafd_result>();
    holder->result = diffuse(ctx, seed_vec, cfg);
    holder->objective = dual_objective(ctx, holder->result.x,
                                       holder->result.sinks,
                                       holder->result.sources);
    holder->flows = extract_flows(ctx, holder->result.x);
    *out = holder.release();
  });
}

void qafd_result_free(qafd_result* r) { delete r; }

size_t qafd_result_node_count(const qafd_result* r) {
  return r != nullptr ? r->result.x.size() : 0;
}

const double* qafd_result_x(const qafd_result* r) {
  return r != nullptr ? r->result.x.data() : nullptr;
}

const double* qafd_result_mass(const qafd_result* r) {
  return r != nullptr ? r->result.m.data() : nullptr;
}

const double* qafd_result_sinks(const qafd_result* r) {
  return r != nullptr ? r->result.sinks.data() : nullptr;
}

const double* qafd_result_sources(const qafd_result* r) {
  return r != nullptr ? r->result.sources.data() : nullptr;
}

size_t qafd_result_support_count(const qafd_result* r) {
  return r != nullptr ? r->result.support.size() : 0;
}

const uint32_t* qafd_result_support(const qafd_result* r) {
  return r != nullptr ? r->result.support.data() : nullptr;
}

uint64_t qafd_result_iterations(const qafd_result* r) {
  return r != nullptr ? r->result.report.iterations : 0;
}

int qafd_result_converged(const qafd_result* r) {
  return r != nullptr &&
         r->result.report.terminated_by == Termination::Converged;
}

double qafd_result_final_excess(const qafd_result* r) {
  return r != nullptr ? r->result.report.final_total_excess : 0.0;
}

double qafd_result_objective(const qafd_result* r) {
  return r != nullptr ? r->objective : 0.0;
}

double qafd_result_gamma_hat(const qafd_result* r) {
  return r != nullptr ? r->result.report.gamma_hat : 0.0;
}

double qafd_result_eta_hat(const qafd_result* r) {
  return r != nullptr ? r->result.report.eta_hat : 0.0;
}

size_t qafd_result_trace_count(const qafd_result* r) {
  return r != nullptr ? r->result.report.trace.size() : 0;
}

qafd_status qafd_result_trace_entry(const qafd_result* r, size_t i,
                                    uint64_t* iteration, double* objective,
                                    double* total_excess) {
  if (r == nullptr || i >= r->result.report.trace.size()) {
    return arg_error("trace index out of range");
  }
  const TraceEntry& entry = r->result.report.trace[i];
  if (iteration != nullptr) *iteration = entry.iteration;
  if (objective != nullptr) *objective = entry.objective;
  if (total_excess != nullptr) *total_excess = entry.total_excess;
  return QAFD_OK;
}

size_t qafd_result_flow_count(const qafd_result* r) {
  return r != nullptr ? r->flows.size() : 0;
}

qafd_status qafd_result_flow_entry(const qafd_result* r, size_t i,
                                   uint32_t* u, uint32_t* v, double* flow) {
  if (r == nullptr || i >= r->flows.size()) {
    return arg_error("flow index out of range");
  }
  const EdgeFlow& f = r->flows[i];
  if (u != nullptr) *u = f.u;
  if (v != nullptr) *v = f.v;
  if (flow != nullptr) *flow = f.flow;
  return QAFD_OK;
}

size_t qafd_result_absorbed_count(const qafd_result* r) {
  return r != nullptr ? r->result.report.absorbed.size() : 0;
}

const uint32_t* qafd_result_absorbed(const qafd_result* r) {
  return r != nullptr ? r->result.report.absorbed.data() : nullptr;
}

/* ----------------------------- retrieval ------------------------------ */

qafd_status qafd_retrieve(const qafd_graph* g, const qafd_weight_params* wp,
                          const double* subquery_embeddings,
                          size_t subquery_count, size_t num_seeds,
                          qafd_similarity seed_sim,
                          const qafd_diffusion_params* dp, int aggregate_sum,
                          qafd_retrieval** out) {
  if (g == nullptr || wp == nullptr || subquery_embeddings == nullptr ||
      dp == nullptr || out == nullptr) {
    return arg_error("null argument");
  }
  return guarded([&] {
    const size_t dim = g->graph.dim();
    SubqueryPlan plan;
    plan.num_seeds = num_seeds;
    plan.seed_sim = to_sim(seed_sim);
    for (size_t k = 0; k < subquery_count; ++k) {
      plan.subqueries.push_back(
          {"q" + std::to_string(k),
           std::vector<double>(subquery_embeddings + k * dim,
                               subquery_embeddings + (k + 1) * dim)});
    }
    const DiffusionConfig cfg = to_config(*dp, g->graph.node_count());
    auto holder = std::make_unique<qafd_retrieval>();
    holder->retrieved =
        retrieve(g->graph, to_scheme(*wp), plan, cfg,
                 aggregate_sum != 0 ? ScoreAggregation::Sum
                                    : ScoreAggregation::Max);
    holder->subqueries = subquery_count;
    holder->ranked =
        rank_nodes(holder->retrieved, holder->retrieved.node_scores.size());
    for (const auto& [id, score] : holder->ranked) {
      holder->labels.push_back(g->graph.node(id).label);
      holder->provenance.push_back(holder->retrieved.provenance.at(id));
    }
    *out = holder.release();
  });
}

void qafd_retrieval_free(qafd_retrieval* r) { delete r; }

size_t qafd_retrieval_subquery_count(const qafd_retrieval* r) {
  return r != nullptr ? r->subqueries : 0;
}

size_t qafd_retrieval_node_count(const qafd_retrieval* r) {
  return r != nullptr ? r->ranked.size() : 0;
}

qafd_status qafd_retrieval_node(const qafd_retrieval* r, size_t i,
                                uint32_t* original_id, double* score) {
  if (r == nullptr || i >= r->ranked.size()) {
    return arg_error("node index out of range");
  }
  if (original_id != nullptr) *original_id = r->ranked[i].first;
  if (score != nullptr) *score = r->ranked[i].second;
  return QAFD_OK;
}

const char* qafd_retrieval_node_label(const qafd_retrieval* r, size_t i) {
  if (r == nullptr || i >= r->labels.size()) return nullptr;
  return r->labels[i].c_str();
}

size_t qafd_retrieval_node_subquery_count(const qafd_retrieval* r, size_t i) {
  if (r == nullptr || i >= r->provenance.size()) return 0;
  return r->provenance[i].size();
}

qafd_status qafd_retrieval_node_subquery(const qafd_retrieval* r, size_t i,
                                         size_t j, size_t* subquery_index) {
  if (r == nullptr || i >= r->provenance.size() ||
      j >= r->provenance[i].size() || subquery_index == nullptr) {
    return arg_error("provenance index out of range");
  }
  *subquery_index = r->provenance[i][j];
  return QAFD_OK;
}

size_t qafd_retrieval_edge_count(const qafd_retrieval* r) {
  return r != nullptr ? r->retrieved.edges.size() : 0;
}

qafd_status qafd_retrieval_edge(const qafd_retrieval* r, size_t i,
                                uint32_t* u, uint32_t* v, double* weight) {
  if (r == nullptr || i >= r->retrieved.edges.size()) {
    return arg_error("edge index out of range");
  }
  const auto& [eu, ev, w] = r->retrieved.edges[i];
  if (u != nullptr) *u = eu;
  if (v != nullptr) *v = ev;
  if (weight != nullptr) *weight = w;
  return QAFD_OK;
}

qafd_status qafd_retrieval_report(const qafd_retrieval* r, size_t k,
                                  uint64_t* iterations, int* converged,
                                  double* final_excess) {
  if (r == nullptr || k >= r->retrieved.reports.size()) {
    return arg_error("report index out of range");
  }
  const RunSummary& s = r->retrieved.reports[k];
  if (iterations != nullptr) *iterations = s.iterations;
  if (converged != nullptr) *converged = s.converged ? 1 : 0;
  if (final_excess != nullptr) *final_excess = s.final_excess;
  return QAFD_OK;
}

/* ---------------------------- oracle check ---------------------------- */

void qafd_oracle_check_params_init(qafd_oracle_check_params* p) {
  if (p == nullptr) return;
  p->instances = 100;
  p->seed = 20260809;
  p->objective_tolerance = 1e-6;
  p->diffusion_epsilon = 1e-8;
  p->min_nodes = 5;
  p->max_nodes = 50;
}

qafd_status qafd_oracle_check_run(const qafd_oracle_check_params* p,
                                  qafd_oracle_report** out) {
  if (p == nullptr || out == nullptr) return arg_error("null argument");
  return guarded([&] {
    auto holder = std::make_unique<qafd_oracle_report>();
    holder->tolerance = p->objective_tolerance;
    for (uint32_t i = 0; i < p->instances; ++i) {
      holder->rows.push_back(run_paired_check(
          derive_seed(p->seed, i), p->diffusion_epsilon,
          p->objective_tolerance, p->min_nodes, p->max_nodes));
    }
    *out = holder.release();
  });
}

void qafd_oracle_report_free(qafd_oracle_report* r) { delete r; }

size_t qafd_oracle_report_count(const qafd_oracle_report* r) {
  return r != nullptr ? r->rows.size() : 0;
}

qafd_status qafd_oracle_report_row(const qafd_oracle_report* r, size_t i,
                                   uint64_t* instance_seed, uint32_t* nodes,
                                   double* objective_solver,
                                   double* objective_oracle, double* abs_diff,
                                   int* pass) {
  if (r == nullptr || i >= r->rows.size()) {
    return arg_error("row index out of range");
  }
  const PairedRun& row = r->rows[i];
  if (instance_seed != nullptr) *instance_seed = row.instance_seed;
  if (nodes != nullptr) *nodes = row.nodes;
  if (objective_solver != nullptr) *objective_solver = row.objective_solver;
  if (objective_oracle != nullptr) *objective_oracle = row.objective_oracle;
  if (abs_diff != nullptr) *abs_diff = row.abs_diff;
  if (pass != nullptr) *pass = row.objective_ok ? 1 : 0;
  return QAFD_OK;
}

int qafd_oracle_report_all_pass(const qafd_oracle_report* r) {
  if (r == nullptr) return 0;
  for (const PairedRun& row : r->rows) {
    if (!row.objective_ok) return 0;
  }
  return 1;
}

/* ------------------------- recovery experiments ----------------------- */

void qafd_synth_params_init(qafd_synth_params* p) {
  if (p == nullptr) return;
  const SynthModelParams regime = SynthModelParams::acceptance_regime();
  p->n = regime.n;
  p->r_k = regime.r_k;
  p->rho1 = regime.rho1;
  p->rho2 = regime.rho2;
  p->background = regime.background;
  p->d = regime.d;
  p->mu_gap = regime.mu_gap;
  p->sigma = regime.sigmas.front();
  p->gamma1 = regime.gamma1;
  p->gamma2 = regime.gamma2;
  p->gamma3 = regime.gamma3;
  p->beta = regime.beta;
  p->seed = 0;
}

qafd_status qafd_recovery_suite_run(const qafd_synth_params* sp,
                                    const qafd_diffusion_params* dp,
                                    uint32_t trials, uint32_t threads,
                                    qafd_recovery_summary** out) {
  if (sp == nullptr || out == nullptr) return arg_error("null argument");
  return guarded([&] {
    SynthModelParams params;
    params.n = sp->n;
    params.r_k = sp->r_k;
    params.rho1 = sp->rho1;
    params.rho2 = sp->rho2;
    params.background = sp->background;
    params.d = sp->d;
    params.mu_gap = sp->mu_gap;
    params.set_uniform_sigma(sp->sigma);
    params.gamma1 = sp->gamma1;
    params.gamma2 = sp->gamma2;
    params.gamma3 = sp->gamma3;
    params.beta = sp->beta;
    params.seed = sp->seed;
    params.validate();

    DiffusionConfig cfg = recovery_trial_config();
    if (dp != nullptr) {
      cfg = to_config(*dp, params.n);
      cfg.source_mode = DiffusionConfig::Source::RecoveryMass;
    }
    auto holder = std::make_unique<qafd_recovery_summary>();
    holder->summary = run_recovery_suite(params, trials, cfg, threads);
    *out = holder.release();
  });
}

void qafd_recovery_summary_free(qafd_recovery_summary* s) { delete s; }

uint32_t qafd_recovery_summary_trials(const qafd_recovery_summary* s) {
  return s != nullptr ? static_cast<uint32_t>(s->summary.trials.size()) : 0;
}

qafd_status qafd_recovery_summary_trial(const qafd_recovery_summary* s,
                                        uint32_t i, uint64_t* trial_seed,
                                        int* full_recovery,
                                        double* leakage_ratio,
                                        uint32_t* support_size,
                                        int* plant_connected, int* converged) {
  if (s == nullptr || i >= s->summary.trials.size()) {
    return arg_error("trial index out of range");
  }
  const RecoveryOutcome& t = s->summary.trials[i];
  if (trial_seed != nullptr) *trial_seed = t.trial_seed;
  if (full_recovery != nullptr) *full_recovery = t.full_recovery ? 1 : 0;
  if (leakage_ratio != nullptr) *leakage_ratio = t.leakage_ratio;
  if (support_size != nullptr) *support_size = t.support_size;
  if (plant_connected != nullptr) *plant_connected = t.plant_connected ? 1 : 0;
  if (converged != nullptr) *converged = t.converged ? 1 : 0;
  return QAFD_OK;
}

double qafd_recovery_summary_recovery_rate(const qafd_recovery_summary* s) {
  return s != nullptr ? s->summary.recovery_rate : 0.0;
}

double qafd_recovery_summary_leakage_ok_rate(const qafd_recovery_summary* s) {
  return s != nullptr ? s->summary.leakage_ok_rate : 0.0;
}

double qafd_recovery_summary_leakage_quantile(const qafd_recovery_summary* s,
                                              double q) {
  return s != nullptr ? s->summary.leakage_quantile(q) : 0.0;
}

double qafd_recovery_summary_median_within_weight(
    const qafd_recovery_summary* s) {
  return s != nullptr ? s->summary.median_within_weight : 0.0;
}

double qafd_recovery_summary_median_boundary_weight(
    const qafd_recovery_summary* s) {
  return s != nullptr ? s->summary.median_boundary_weight : 0.0;
}

double qafd_recovery_summary_connected_rate(const qafd_recovery_summary* s) {
  return s != nullptr ? s->summary.connected_rate : 0.0;
}

} /* extern "C" */
