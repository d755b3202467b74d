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

// Exercises the shared-library surface against results from the C++ core.

#include <qafd.h>

#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "diffusion.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "weighting.hpp"

namespace {

struct CGraph {
  qafd_graph* g = nullptr;
  ~CGraph() { qafd_graph_free(g); }
};

CGraph make_path_graph() {
  const char* labels[] = {"a", "b", "c"};
  const double embeddings[] = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  const uint32_t eu[] = {0, 1};
  const uint32_t ev[] = {1, 2};
  CGraph out;
  REQUIRE(qafd_graph_create(labels, embeddings, 3, 2, eu, ev, nullptr, 2,
                            &out.g) == QAFD_OK);
  return out;
}

}  // namespace

TEST_CASE("c api reports errors with codes and messages") {
  const char* labels[] = {"a"};
  const double embeddings[] = {1.0};
  const uint32_t eu[] = {0};
  const uint32_t ev[] = {0};
  qafd_graph* g = nullptr;
  const qafd_status status =
      qafd_graph_create(labels, embeddings, 1, 1, eu, ev, nullptr, 1, &g);
  CHECK(status == QAFD_ERROR_SELF_LOOP);
  CHECK(std::string(qafd_status_name(status)) == "self_loop");
  CHECK(std::string(qafd_last_error()).find("self-loop") !=
        std::string::npos);
  CHECK(g == nullptr);
}

TEST_CASE("graph accessors") {
  CGraph graph = make_path_graph();
  CHECK(qafd_graph_node_count(graph.g) == 3);
  CHECK(qafd_graph_edge_count(graph.g) == 2);
  CHECK(qafd_graph_dim(graph.g) == 2);
  CHECK(qafd_graph_degree(graph.g, 1) == 2);
  CHECK(qafd_graph_max_degree(graph.g) == 2);
  CHECK(std::string(qafd_graph_label(graph.g, 2)) == "c");
  uint32_t u = 0, v = 0;
  double w = 0.0;
  REQUIRE(qafd_graph_edge(graph.g, 0, &u, &v, &w) == QAFD_OK);
  CHECK(u == 0);
  CHECK(v == 1);
  CHECK(w == 1.0);
}

TEST_CASE("similarity and edge weights through the c api") {
  const double a[] = {1.0, 0.0};
  const double b[] = {0.0, 1.0};
  double out = -1.0;
  REQUIRE(qafd_similarity_eval({QAFD_SIM_COSINE, 1.0}, a, b, 2, &out) ==
          QAFD_OK);
  CHECK(out == doctest::Approx(0.0));

  CGraph graph = make_path_graph();
  qafd_weight_params wp;
  qafd_weight_params_init(&wp);
  const double query[] = {0.5, 0.5};
  double weight = 0.0;
  REQUIRE(qafd_edge_weight(graph.g, &wp, query, 0, 1, &weight) == QAFD_OK);
  CHECK(weight == doctest::Approx(1.5));  // hybrid with unit cosines
  CHECK(qafd_edge_weight(graph.g, &wp, query, 0, 2, &weight) ==
        QAFD_ERROR_NOT_AN_EDGE);
}

TEST_CASE("seed scoring and selection through the c api") {
  CGraph graph = make_path_graph();
  const double keywords[] = {0.5, 0.5};
  double scores[3] = {0, 0, 0};
  uint64_t evals = 0;
  REQUIRE(qafd_score_nodes(graph.g, keywords, 1, {QAFD_SIM_COSINE, 1.0},
                           scores, &evals) == QAFD_OK);
  CHECK(evals == 3);
  uint32_t ids[2] = {9, 9};
  double top[2] = {0, 0};
  REQUIRE(qafd_select_seeds(scores, 3, 2, ids, top) == QAFD_OK);
  CHECK(ids[0] == 0);  // ties broken by ascending id
  CHECK(ids[1] == 1);
  CHECK(qafd_select_seeds(scores, 3, 5, ids, nullptr) ==
        QAFD_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("c api diffusion matches the core") {
  CGraph graph = make_path_graph();
  qafd_weight_params wp;
  qafd_weight_params_init(&wp);
  wp.scheme = QAFD_SCHEME_PRODUCT;
  wp.use_product_bandwidths = 1;
  wp.gamma1 = wp.gamma2 = wp.gamma3 = 1.0;
  const double query[] = {0.5, 0.5};

  qafd_diffusion_params dp;
  qafd_diffusion_params_init(&dp);
  const double sinks[] = {1.0, 1.0, 1.0};
  const double sources[] = {2.0, 0.0, 0.0};
  dp.sink_mode = QAFD_SINK_EXPLICIT;
  dp.explicit_sinks = sinks;
  dp.source_mode = QAFD_SOURCE_EXPLICIT;
  dp.explicit_sources = sources;
  dp.epsilon = 1e-9;
  dp.selection = QAFD_SELECT_FIFO;
  dp.trace = QAFD_TRACE_EVERY_PUSH;

  qafd_result* result = nullptr;
  REQUIRE(qafd_diffuse(graph.g, &wp, query, nullptr, 0, &dp, &result) ==
          QAFD_OK);

  // Core-side reference run.
  const qafd::Graph core_graph = qafd::testing::make_weighted_graph(
      3, {{0, 1, 1.0}, {1, 2, 1.0}});
  qafd::QueryContext ctx(core_graph, qafd::testing::structural_scheme(),
                         qafd::testing::structural_query());
  qafd::DiffusionConfig cfg;
  cfg.sink_mode = qafd::DiffusionConfig::Sink::Explicit;
  cfg.explicit_sinks = {1.0, 1.0, 1.0};
  cfg.source_mode = qafd::DiffusionConfig::Source::Explicit;
  cfg.explicit_sources = {2.0, 0.0, 0.0};
  cfg.epsilon = 1e-9;
  cfg.selection = qafd::DiffusionConfig::Selection::Fifo;
  cfg.trace = qafd::DiffusionConfig::Trace::EveryPush;
  const qafd::DiffusionResult expected = qafd::diffuse(ctx, {}, cfg);

  REQUIRE(qafd_result_node_count(result) == 3);
  const double* x = qafd_result_x(result);
  const double* m = qafd_result_mass(result);
  for (std::size_t v = 0; v < 3; ++v) {
    CHECK(x[v] == expected.x[v]);
    CHECK(m[v] == expected.m[v]);
  }
  CHECK(qafd_result_iterations(result) == expected.report.iterations);
  CHECK(qafd_result_converged(result) == 1);
  CHECK(qafd_result_support_count(result) == expected.support.size());
  CHECK(qafd_result_trace_count(result) == expected.report.trace.size());

  // Flows: edge (0,1) carries positive flow toward node 1.
  bool found = false;
  for (std::size_t i = 0; i < qafd_result_flow_count(result); ++i) {
    uint32_t u = 0, v = 0;
    double flow = 0.0;
    qafd_result_flow_entry(result, i, &u, &v, &flow);
    if (u == 0 && v == 1) {
      CHECK(flow > 0.0);
      found = true;
    }
  }
  CHECK(found);
  qafd_result_free(result);
}

TEST_CASE("c api retrieval over two clusters") {
  // Mirror of the core two-cluster fixture.
  std::vector<std::string> label_storage;
  std::vector<const char*> labels;
  std::vector<double> embeddings;
  for (int v = 0; v < 10; ++v) {
    label_storage.push_back("n" + std::to_string(v));
    embeddings.push_back(v < 5 ? 1.0 : 0.0);
    embeddings.push_back(v < 5 ? 0.0 : 1.0);
  }
  for (const auto& s : label_storage) labels.push_back(s.c_str());
  std::vector<uint32_t> eu, ev;
  auto ring = [&](uint32_t base) {
    for (uint32_t i = 0; i < 5; ++i) {
      eu.push_back(base + i);
      ev.push_back(base + (i + 1) % 5);
    }
  };
  ring(0);
  ring(5);
  eu.push_back(4);
  ev.push_back(5);

  CGraph graph;
  REQUIRE(qafd_graph_create(labels.data(), embeddings.data(), 10, 2,
                            eu.data(), ev.data(), nullptr, eu.size(),
                            &graph.g) == QAFD_OK);

  qafd_weight_params wp;
  qafd_weight_params_init(&wp);
  wp.scheme = QAFD_SCHEME_PRODUCT;
  wp.use_product_bandwidths = 1;
  wp.gamma1 = wp.gamma2 = wp.gamma3 = 1.5;

  qafd_diffusion_params dp;
  qafd_diffusion_params_init(&dp);
  dp.alpha = 0.4;
  dp.epsilon = 1e-6;
  dp.selection = QAFD_SELECT_FIFO;
  dp.trace = QAFD_TRACE_NONE;

  const double subqueries[] = {1.0, 0.0, 0.0, 1.0};
  qafd_retrieval* retrieval = nullptr;
  REQUIRE(qafd_retrieve(graph.g, &wp, subqueries, 2, 2,
                        {QAFD_SIM_RBF, 1.5}, &dp, 0, &retrieval) == QAFD_OK);
  CHECK(qafd_retrieval_subquery_count(retrieval) == 2);
  CHECK(qafd_retrieval_node_count(retrieval) > 0);

  // Ranked order: scores never increase.
  double prev = 1e300;
  for (std::size_t i = 0; i < qafd_retrieval_node_count(retrieval); ++i) {
    uint32_t id = 0;
    double score = 0.0;
    REQUIRE(qafd_retrieval_node(retrieval, i, &id, &score) == QAFD_OK);
    CHECK(score <= prev);
    prev = score;
    CHECK(qafd_retrieval_node_label(retrieval, i) != nullptr);
    CHECK(qafd_retrieval_node_subquery_count(retrieval, i) >= 1);
  }
  for (std::size_t i = 0; i < qafd_retrieval_edge_count(retrieval); ++i) {
    uint32_t u = 0, v = 0;
    double w = 0.0;
    REQUIRE(qafd_retrieval_edge(retrieval, i, &u, &v, &w) == QAFD_OK);
    CHECK(u < v);
    CHECK(w > 0.0);
  }
  uint64_t iterations = 0;
  int converged = 0;
  double excess = 0.0;
  REQUIRE(qafd_retrieval_report(retrieval, 0, &iterations, &converged,
                                &excess) == QAFD_OK);
  CHECK(converged == 1);
  qafd_retrieval_free(retrieval);
}

TEST_CASE("oracle comparison suite through the c api") {
  qafd_oracle_check_params params;
  qafd_oracle_check_params_init(&params);
  CHECK(params.instances == 100);
  params.instances = 5;
  qafd_oracle_report* report = nullptr;
  REQUIRE(qafd_oracle_check_run(&params, &report) == QAFD_OK);
  CHECK(qafd_oracle_report_count(report) == 5);
  CHECK(qafd_oracle_report_all_pass(report) == 1);
  uint64_t seed = 0;
  uint32_t nodes = 0;
  double fs = 0, fo = 0, diff = 0;
  int pass = 0;
  REQUIRE(qafd_oracle_report_row(report, 0, &seed, &nodes, &fs, &fo, &diff,
                                 &pass) == QAFD_OK);
  CHECK(nodes >= 5);
  CHECK(nodes <= 50);
  CHECK(pass == 1);
  qafd_oracle_report_free(report);
}

TEST_CASE("recovery suite determinism across thread counts via the c api") {
  qafd_synth_params sp;
  qafd_synth_params_init(&sp);
  CHECK(sp.n == 200);
  CHECK(sp.sigma == doctest::Approx(0.025));
  sp.n = 40;
  sp.r_k = 6;
  sp.d = 8;
  sp.seed = 3;

  qafd_diffusion_params dp;
  qafd_diffusion_params_init(&dp);
  dp.source_mode = QAFD_SOURCE_RECOVERY_MASS;
  dp.max_iterations = 5000;
  dp.trace = QAFD_TRACE_NONE;

  qafd_recovery_summary* serial = nullptr;
  qafd_recovery_summary* parallel = nullptr;
  REQUIRE(qafd_recovery_suite_run(&sp, &dp, 4, 1, &serial) == QAFD_OK);
  REQUIRE(qafd_recovery_suite_run(&sp, &dp, 4, 3, &parallel) == QAFD_OK);
  REQUIRE(qafd_recovery_summary_trials(serial) == 4);
  for (uint32_t i = 0; i < 4; ++i) {
    uint64_t seed_a = 0, seed_b = 0;
    int rec_a = 0, rec_b = 0, conn_a = 0, conn_b = 0, conv_a = 0, conv_b = 0;
    double leak_a = 0, leak_b = 0;
    uint32_t sup_a = 0, sup_b = 0;
    qafd_recovery_summary_trial(serial, i, &seed_a, &rec_a, &leak_a, &sup_a,
                                &conn_a, &conv_a);
    qafd_recovery_summary_trial(parallel, i, &seed_b, &rec_b, &leak_b, &sup_b,
                                &conn_b, &conv_b);
    CHECK(seed_a == seed_b);
    CHECK(rec_a == rec_b);
    CHECK(leak_a == leak_b);
    CHECK(sup_a == sup_b);
  }
  CHECK(qafd_recovery_summary_median_within_weight(serial) ==
        qafd_recovery_summary_median_within_weight(parallel));
  qafd_recovery_summary_free(serial);
  qafd_recovery_summary_free(parallel);
}

TEST_CASE("version and status names are stable strings") {
  CHECK(std::strlen(qafd_version()) > 0);
  CHECK(std::string(qafd_status_name(QAFD_OK)) == "ok");
}
