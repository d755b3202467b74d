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

#include <random>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"

using namespace qafd;
using qafd::testing::make_node;
using qafd::testing::make_weighted_graph;
using qafd::testing::random_graph;

TEST_CASE("path graph degrees") {
  const Graph g = make_weighted_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(g.max_degree() == 2);
}

TEST_CASE("isolated node has max degree zero") {
  const Graph g = make_weighted_graph(1, {});
  CHECK(g.node_count() == 1);
  CHECK(g.max_degree() == 0);
}

TEST_CASE("build rejects bad edges") {
  auto nodes = [] {
    return std::vector<Node>{make_node(0, {1.0}), make_node(1, {2.0})};
  };
  CHECK_THROWS_WITH_AS(Graph::build(nodes(), {{0, 0, 1.0, ""}}),
                       doctest::Contains("self-loop"), Error);
  CHECK_THROWS_AS(Graph::build(nodes(), {{0, 1, 1.0, ""}, {1, 0, 1.0, ""}}),
                  Error);
  CHECK_THROWS_AS(Graph::build(nodes(), {{0, 2, 1.0, ""}}), Error);
  CHECK_THROWS_AS(Graph::build(nodes(), {{0, 1, 0.0, ""}}), Error);
  CHECK_THROWS_AS(
      Graph::build({make_node(0, {1.0}), make_node(1, {1.0, 2.0})}, {}),
      Error);
}

TEST_CASE("error codes distinguish failure modes") {
  try {
    Graph::build({make_node(0, {1.0})}, {{0, 0, 1.0, ""}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SelfLoop);
  }
  try {
    Graph::build({make_node(0, {1.0})}, {{0, 3, 1.0, ""}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DanglingEndpoint);
  }
}

TEST_CASE("induced subgraph keeps exactly internal edges") {
  const Graph tri =
      make_weighted_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  const InducedSubgraph sub = induced_subgraph(tri, {0, 1});
  CHECK(sub.graph.node_count() == 2);
  CHECK(sub.graph.edge_count() == 1);
  CHECK(sub.original_ids == std::vector<NodeId>{0, 1});
  // Labels carry the original identity through the reindexing.
  CHECK(sub.graph.node(0).label == "n0");
  CHECK(sub.graph.node(1).label == "n1");
}

TEST_CASE("induced subgraph identity and empty cases") {
  const Graph tri =
      make_weighted_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  const InducedSubgraph all = induced_subgraph(tri, {0, 1, 2});
  CHECK(all.graph.same_as(tri));
  const InducedSubgraph none = induced_subgraph(tri, {});
  CHECK(none.graph.node_count() == 0);
  CHECK(none.graph.edge_count() == 0);
  CHECK_THROWS_AS(induced_subgraph(tri, {7}), Error);
}

TEST_CASE("induced subgraph is idempotent") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 10; ++round) {
    const Graph g = random_graph(rng, 12, 10);
    std::vector<NodeId> keep;
    std::uniform_int_distribution<int> coin(0, 1);
    for (NodeId v = 0; v < 12; ++v) {
      if (coin(rng)) keep.push_back(v);
    }
    const InducedSubgraph once = induced_subgraph(g, keep);
    std::vector<NodeId> all(once.graph.node_count());
    std::iota(all.begin(), all.end(), 0);
    const InducedSubgraph twice = induced_subgraph(once.graph, all);
    CHECK(twice.graph.same_as(once.graph));
  }
}

TEST_CASE("adjacency symmetry and degree sum") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 10; ++round) {
    const Graph g = random_graph(rng, 20, 15);
    std::size_t degree_sum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      degree_sum += g.degree(v);
      for (const auto& entry : g.neighbors(v)) {
        bool back = false;
        for (const auto& other : g.neighbors(entry.neighbor)) {
          back |= other.neighbor == v;
        }
        CHECK(back);
      }
    }
    CHECK(degree_sum == 2 * g.edge_count());
  }
}

TEST_CASE("find_edge agrees with the edge list") {
  std::mt19937_64 rng(13);
  const Graph g = random_graph(rng, 15, 12);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    REQUIRE(g.find_edge(e.u, e.v).has_value());
    CHECK(*g.find_edge(e.u, e.v) == i);
    CHECK(*g.find_edge(e.v, e.u) == i);
  }
  CHECK_FALSE(g.find_edge(0, 0).has_value());
}
