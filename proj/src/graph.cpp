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

#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "error.hpp"

namespace qafd {

Graph Graph::build(std::vector<Node> nodes, std::vector<Edge> edges) {
  Graph g;
  const std::size_t n = nodes.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].id != static_cast<NodeId>(i)) {
      raise(ErrorCode::InvalidArgument,
            "node at position " + std::to_string(i) + " has id " +
                std::to_string(nodes[i].id));
    }
  }
  if (n > 0) {
    g.dim_ = nodes[0].embedding.size();
    for (const Node& node : nodes) {
      if (node.embedding.size() != g.dim_) {
        raise(ErrorCode::DimensionMismatch,
              "node '" + node.label + "' has embedding dimension " +
                  std::to_string(node.embedding.size()) + ", expected " +
                  std::to_string(g.dim_));
      }
      for (double value : node.embedding) {
        if (!std::isfinite(value)) {
          raise(ErrorCode::InvalidArgument,
                "node '" + node.label + "' has a non-finite embedding entry");
        }
      }
    }
  }

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      raise(ErrorCode::DanglingEndpoint,
            "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                ") references a missing node");
    }
    if (e.u == e.v) {
      raise(ErrorCode::SelfLoop,
            "self-loop at node " + std::to_string(e.u));
    }
    if (!(e.base_weight > 0.0) || !std::isfinite(e.base_weight)) {
      raise(ErrorCode::InvalidArgument,
            "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                ") has non-positive base weight");
    }
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      raise(ErrorCode::DuplicateEdge,
            "duplicate edge (" + std::to_string(key.first) + ", " +
                std::to_string(key.second) + ")");
    }
  }

  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  g.adjacency_.assign(n, {});
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    const auto idx = static_cast<std::uint32_t>(i);
    g.adjacency_[e.u].push_back({e.v, idx});
    g.adjacency_[e.v].push_back({e.u, idx});
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const AdjEntry& a, const AdjEntry& b) {
                return a.neighbor < b.neighbor;
              });
    g.max_degree_ = std::max(g.max_degree_, adj.size());
  }
  return g;
}

const Node& Graph::node(NodeId v) const {
  if (v >= nodes_.size()) {
    raise(ErrorCode::UnknownNode, "node id " + std::to_string(v) +
                                      " out of range (node count " +
                                      std::to_string(nodes_.size()) + ")");
  }
  return nodes_[v];
}

const Edge& Graph::edge(std::size_t index) const {
  if (index >= edges_.size()) {
    raise(ErrorCode::InvalidArgument,
          "edge index " + std::to_string(index) + " out of range");
  }
  return edges_[index];
}

std::size_t Graph::degree(NodeId v) const {
  node(v);
  return adjacency_[v].size();
}

std::span<const Graph::AdjEntry> Graph::neighbors(NodeId v) const {
  node(v);
  return {adjacency_[v].data(), adjacency_[v].size()};
}

std::optional<std::uint32_t> Graph::find_edge(NodeId u, NodeId v) const {
  node(u);
  node(v);
  // Scan the smaller adjacency list; it is sorted by neighbor id.
  const auto& shorter =
      adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u]
                                                   : adjacency_[v];
  const NodeId target = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
  auto it = std::lower_bound(shorter.begin(), shorter.end(), target,
                             [](const AdjEntry& a, NodeId t) {
                               return a.neighbor < t;
                             });
  if (it != shorter.end() && it->neighbor == target) return it->edge_index;
  return std::nullopt;
}

bool Graph::same_as(const Graph& other) const {
  if (nodes_.size() != other.nodes_.size() ||
      edges_.size() != other.edges_.size() || dim_ != other.dim_) {
    return false;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].label != other.nodes_[i].label ||
        nodes_[i].embedding != other.nodes_[i].embedding) {
      return false;
    }
  }
  auto canonical = [](const Graph& g) {
    std::vector<std::tuple<NodeId, NodeId, double>> out;
    out.reserve(g.edges_.size());
    for (const Edge& e : g.edges_) {
      auto [a, b] = std::minmax(e.u, e.v);
      out.emplace_back(a, b, e.base_weight);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return canonical(*this) == canonical(other);
}

InducedSubgraph induced_subgraph(const Graph& g,
                                 const std::vector<NodeId>& keep) {
  std::vector<NodeId> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<std::int64_t> remap(g.node_count(), -1);
  std::vector<Node> nodes;
  nodes.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Node& src = g.node(sorted[i]);  // throws UnknownNode if stale
    remap[sorted[i]] = static_cast<std::int64_t>(i);
    Node copy = src;
    copy.id = static_cast<NodeId>(i);
    nodes.push_back(std::move(copy));
  }

  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const auto mu = remap[e.u];
    const auto mv = remap[e.v];
    if (mu < 0 || mv < 0) continue;
    Edge copy = e;
    copy.u = static_cast<NodeId>(mu);
    copy.v = static_cast<NodeId>(mv);
    edges.push_back(std::move(copy));
  }

  InducedSubgraph out{Graph::build(std::move(nodes), std::move(edges)),
                      std::move(sorted)};
  return out;
}

}  // namespace qafd
