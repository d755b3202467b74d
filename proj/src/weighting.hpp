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
#include <vector>

#include "embedding.hpp"
#include "graph.hpp"

namespace qafd {

enum class Combine { Add, Mul };

/// Per-factor RBF bandwidths for the product scheme. The node-query factors
/// are assigned by id order: gamma2 applies to the lower-id endpoint of an
/// edge, gamma3 to the higher-id one, which keeps weights symmetric.
struct ProductBandwidths {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma3 = 1.0;
};

/// Query-aware edge-weight family. Writing s_uv for the node-node
/// similarity and s_uq, s_vq for the node-query similarities:
///
///   Mean:    (s_uv + s_uq + s_vq) / 3
///   Product: s_uv * s_uq * s_vq
///   Hybrid:  s_uv * (a + b * (s_uq + s_vq))
///   Generic: (c * s_uv) o (a + b * (s_uq o s_vq)),  o in {Add, Mul}
///
/// The scheme value is multiplied by the edge's structural base weight and
/// clamped below by `floor` so every weight stays strictly positive.
struct WeightScheme {
  enum class Variant { Mean, Product, Hybrid, Generic };

  Variant variant = Variant::Hybrid;
  double a = 1.0;
  double b = 0.25;
  double c = 1.0;
  Combine combine = Combine::Mul;
  SimilarityKind node_node_sim = SimilarityKind::cosine();
  SimilarityKind node_query_sim = SimilarityKind::cosine();
  std::optional<ProductBandwidths> product_bandwidths;
  double floor = 1e-10;

  static WeightScheme mean();
  static WeightScheme product();
  static WeightScheme hybrid(double a, double b);
  static WeightScheme generic(double a, double b, double c, Combine combine);
  static WeightScheme product_rbf(double gamma1, double gamma2, double gamma3);

  void validate() const;
};

/// Per-query memo of node-query similarities, edge weights and weighted
/// degrees. Single writer; one context per (graph, query, scheme) run.
class QueryContext {
 public:
  QueryContext(const Graph& g, const WeightScheme& scheme,
               std::vector<double> query_embedding);

  const Graph& graph() const { return *graph_; }
  const WeightScheme& scheme() const { return scheme_; }
  const std::vector<double>& query() const { return query_; }

  /// Query-aware weight of the edge with this index.
  double edge_weight_by_index(std::uint32_t edge_index);

  /// Sum of query-aware weights over v's incident edges.
  double weighted_degree(NodeId v);

  void clear_cache();

 private:
  double node_query(NodeId v, bool high_role);

  const Graph* graph_;
  WeightScheme scheme_;
  std::vector<double> query_;

  std::vector<double> edge_cache_;
  std::vector<char> edge_cached_;
  std::vector<double> degree_cache_;
  std::vector<char> degree_cached_;
  // Node-query similarities; the second array is only used when product
  // bandwidths give the two query factors different kernels.
  std::vector<double> nq_low_, nq_high_;
  std::vector<char> nq_low_cached_, nq_high_cached_;
  bool split_roles_ = false;
};

/// Weight of edge (u, v); NotAnEdge when the pair is not adjacent.
double edge_weight(QueryContext& ctx, NodeId u, NodeId v);

/// exp(-g1 |eu-ev|^2) * exp(-g2 |eu-eq|^2) * exp(-g3 |ev-eq|^2), clamped
/// below by `floor`.
double rbf_product_weight(double gamma1, double gamma2, double gamma3,
                          std::span<const double> e_u,
                          std::span<const double> e_v,
                          std::span<const double> e_q, double floor = 1e-10);

}  // namespace qafd
