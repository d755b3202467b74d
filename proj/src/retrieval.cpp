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

#include "retrieval.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "error.hpp"
#include "seeding.hpp"

namespace qafd {

RetrievedSubgraph retrieve(const Graph& g, const WeightScheme& scheme,
                           const SubqueryPlan& plan,
                           const DiffusionConfig& cfg,
                           ScoreAggregation aggregation) {
  if (plan.subqueries.empty()) {
    raise(ErrorCode::InvalidArgument, "subquery plan is empty");
  }
  if (plan.num_seeds == 0) {
    raise(ErrorCode::InvalidArgument, "need at least one seed per subquery");
  }

  RetrievedSubgraph out;
  std::map<NodeId, double> scores;
  std::map<NodeId, std::set<std::size_t>> provenance;
  std::map<std::pair<NodeId, NodeId>, double> union_edges;
  std::set<NodeId> union_nodes;

  for (std::size_t k = 0; k < plan.subqueries.size(); ++k) {
    const auto& sub = plan.subqueries[k];
    if (sub.embedding.size() != g.dim()) {
      raise(ErrorCode::DimensionMismatch,
            "subquery '" + sub.text + "' embedding dimension " +
                std::to_string(sub.embedding.size()) +
                " does not match graph dimension " + std::to_string(g.dim()));
    }

    // Seeds are re-selected per subquery against its own embedding.
    KeywordSet kw{{sub.text}, {sub.embedding}};
    NodeScores scored = score_nodes(g, kw, plan.seed_sim);
    const std::size_t n_seeds = std::min(plan.num_seeds, g.node_count());
    SeedSelection sel = select_seeds(std::move(scored.scores), n_seeds);

    QueryContext ctx(g, scheme, sub.embedding);
    DiffusionResult res = diffuse(ctx, sel.seeds, cfg);

    RunSummary summary;
    summary.iterations = res.report.iterations;
    summary.converged = res.report.terminated_by == Termination::Converged;
    summary.final_excess = res.report.final_total_excess;
    summary.objective = dual_objective(ctx, res.x, res.sinks, res.sources);
    out.reports.push_back(summary);

    std::vector<char> in_support(g.node_count(), 0);
    for (NodeId v : res.support) in_support[v] = 1;
    for (NodeId v : res.support) {
      union_nodes.insert(v);
      provenance[v].insert(k);
      auto [it, inserted] = scores.emplace(v, res.x[v]);
      if (!inserted) {
        it->second = aggregation == ScoreAggregation::Max
                         ? std::max(it->second, res.x[v])
                         : it->second + res.x[v];
      }
    }
    // Induced edges of this support, then unioned across subqueries.
    for (const Edge& e : g.edges()) {
      if (!in_support[e.u] || !in_support[e.v]) continue;
      const auto key = std::minmax(e.u, e.v);
      const double w = edge_weight(ctx, e.u, e.v);
      auto [it, inserted] = union_edges.emplace(key, w);
      if (!inserted) it->second = std::max(it->second, w);
    }
  }

  if (union_nodes.empty()) {
    raise(ErrorCode::EmptyRetrieval,
          "every subquery produced an empty support");
  }

  std::vector<NodeId> keep(union_nodes.begin(), union_nodes.end());
  std::map<NodeId, NodeId> remap;
  std::vector<Node> nodes;
  nodes.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    remap[keep[i]] = static_cast<NodeId>(i);
    Node copy = g.node(keep[i]);
    copy.id = static_cast<NodeId>(i);
    nodes.push_back(std::move(copy));
  }
  std::vector<Edge> edges;
  for (const auto& [key, weight] : union_edges) {
    Edge e;
    e.u = remap[key.first];
    e.v = remap[key.second];
    e.base_weight = g.edge(*g.find_edge(key.first, key.second)).base_weight;
    edges.push_back(e);
    out.edges.emplace_back(key.first, key.second, weight);
  }
  out.graph = Graph::build(std::move(nodes), std::move(edges));
  out.original_ids = std::move(keep);
  out.node_scores = std::move(scores);
  for (auto& [v, ks] : provenance) {
    out.provenance[v] = std::vector<std::size_t>(ks.begin(), ks.end());
  }
  return out;
}

std::vector<std::pair<NodeId, double>> rank_nodes(const RetrievedSubgraph& r,
                                                  std::size_t top_k) {
  if (top_k == 0) {
    raise(ErrorCode::InvalidArgument, "top_k must be at least 1");
  }
  std::vector<std::pair<NodeId, double>> ranked(r.node_scores.begin(),
                                                r.node_scores.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& lhs, const auto& rhs) {
              if (lhs.second != rhs.second) return lhs.second > rhs.second;
              return lhs.first < rhs.first;
            });
  if (ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

}  // namespace qafd
