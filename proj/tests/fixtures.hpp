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

#include <random>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"
#include "weighting.hpp"

namespace qafd::testing {

inline Node make_node(NodeId id, std::vector<double> embedding) {
  return Node{id, "n" + std::to_string(id), std::move(embedding)};
}

/// Nodes share one embedding, so RBF similarities are exactly 1 and the
/// product scheme reproduces the structural base weights.
inline Graph make_weighted_graph(
    std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges,
    std::vector<double> shared_embedding = {0.5, 0.5}) {
  std::vector<Node> nodes;
  for (std::size_t v = 0; v < n; ++v) {
    nodes.push_back(make_node(static_cast<NodeId>(v), shared_embedding));
  }
  std::vector<Edge> es;
  for (const auto& [u, v, w] : edges) {
    es.push_back({u, v, w, ""});
  }
  return Graph::build(std::move(nodes), std::move(es));
}

inline WeightScheme structural_scheme() {
  return WeightScheme::product_rbf(1.0, 1.0, 1.0);
}

inline std::vector<double> structural_query() { return {0.5, 0.5}; }

/// Connected random graph (spanning tree plus extras) with random
/// embeddings, for property-style tests.
inline Graph random_graph(std::mt19937_64& rng, std::size_t n,
                          std::size_t extra_edges, std::size_t dim = 3) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<Node> nodes;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> e(dim);
    for (auto& value : e) value = coord(rng);
    nodes.push_back(make_node(static_cast<NodeId>(v), std::move(e)));
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> parent(0,
                                                 static_cast<NodeId>(v - 1));
    const NodeId p = parent(rng);
    edges.push_back({p, static_cast<NodeId>(v), 1.0, ""});
    seen.insert({p, static_cast<NodeId>(v)});
  }
  std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(n - 1));
  for (std::size_t i = 0; i < extra_edges; ++i) {
    NodeId u = any(rng), v = any(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    edges.push_back({u, v, 1.0, ""});
  }
  return Graph::build(std::move(nodes), std::move(edges));
}

}  // namespace qafd::testing
