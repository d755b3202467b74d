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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "diffusion.hpp"
#include "graph.hpp"
#include "weighting.hpp"

namespace qafd {

/// K subqueries with embeddings; each gets its own seed selection and
/// diffusion run.
struct SubqueryPlan {
  struct Entry {
    std::string text;
    std::vector<double> embedding;
  };
  std::vector<Entry> subqueries;
  std::size_t num_seeds = 40;
  SimilarityKind seed_sim = SimilarityKind::cosine();
};

enum class ScoreAggregation { Max, Sum };

struct RunSummary {
  std::uint64_t iterations = 0;
  bool converged = false;
  double final_excess = 0.0;
  double objective = 0.0;
};

/// Union of the per-subquery retrieved subgraphs. All node ids in the maps
/// and edge list refer to the ORIGINAL graph; `graph` is the reindexed
/// union with `original_ids` giving the correspondence.
struct RetrievedSubgraph {
  Graph graph;
  std::vector<NodeId> original_ids;
  std::map<NodeId, double> node_scores;
  std::map<NodeId, std::vector<std::size_t>> provenance;
  /// Union of per-subquery induced edge sets with the largest realized
  /// query-aware weight among contributing subqueries.
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  std::vector<RunSummary> reports;
};

/// Runs one diffusion per subquery, thresholds supports at the
/// configuration's support threshold, and unions the induced subgraphs.
/// Fails with EmptyRetrieval when every support is empty.
RetrievedSubgraph retrieve(const Graph& g, const WeightScheme& scheme,
                           const SubqueryPlan& plan,
                           const DiffusionConfig& cfg,
                           ScoreAggregation aggregation = ScoreAggregation::Max);

/// Top-k nodes by (score desc, id asc); ids are original graph ids.
std::vector<std::pair<NodeId, double>> rank_nodes(const RetrievedSubgraph& r,
                                                  std::size_t top_k);

}  // namespace qafd
