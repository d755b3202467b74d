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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qafd {

/// Dense node index. Ties anywhere in the library break by ascending id.
using NodeId = std::uint32_t;

struct Node {
  NodeId id = 0;
  std::string label;
  std::vector<double> embedding;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double base_weight = 1.0;
  /// Optional relation annotation carried through from ingest; the solver
  /// never reads it.
  std::string relation;
};

/// Immutable attributed undirected graph with adjacency access.
///
/// Invariants checked at build time: no self-loops, at most one edge per
/// node pair, valid endpoints, positive base weights, one embedding
/// dimension shared by every node, finite embedding entries.
class Graph {
 public:
  struct AdjEntry {
    NodeId neighbor;
    std::uint32_t edge_index;
  };

  /// An empty graph; populate through build().
  Graph() = default;

  /// Validates and builds. Node ids are positions in `nodes`; each
  /// Node::id must match its position.
  static Graph build(std::vector<Node> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t max_degree() const { return max_degree_; }

  const Node& node(NodeId v) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const;

  std::size_t degree(NodeId v) const;
  std::span<const AdjEntry> neighbors(NodeId v) const;

  /// Index of the edge joining u and v, if present.
  std::optional<std::uint32_t> find_edge(NodeId u, NodeId v) const;

  /// Structural equality including labels, embeddings and base weights.
  bool same_as(const Graph& other) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<AdjEntry>> adjacency_;
  std::size_t dim_ = 0;
  std::size_t max_degree_ = 0;
};

struct InducedSubgraph {
  Graph graph;
  /// Maps each new node id to its id in the source graph.
  std::vector<NodeId> original_ids;
};

/// Subgraph over `keep` with exactly the edges whose both endpoints are
/// kept. Labels, embeddings and base weights are preserved; new ids are
/// assigned in ascending original-id order.
InducedSubgraph induced_subgraph(const Graph& g,
                                 const std::vector<NodeId>& keep);

}  // namespace qafd
