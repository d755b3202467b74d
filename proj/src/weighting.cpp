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

#include "weighting.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace qafd {

WeightScheme WeightScheme::mean() {
  WeightScheme s;
  s.variant = Variant::Mean;
  return s;
}

WeightScheme WeightScheme::product() {
  WeightScheme s;
  s.variant = Variant::Product;
  return s;
}

WeightScheme WeightScheme::hybrid(double a, double b) {
  WeightScheme s;
  s.variant = Variant::Hybrid;
  s.a = a;
  s.b = b;
  return s;
}

WeightScheme WeightScheme::generic(double a, double b, double c,
                                   Combine combine) {
  WeightScheme s;
  s.variant = Variant::Generic;
  s.a = a;
  s.b = b;
  s.c = c;
  s.combine = combine;
  return s;
}

WeightScheme WeightScheme::product_rbf(double gamma1, double gamma2,
                                       double gamma3) {
  WeightScheme s;
  s.variant = Variant::Product;
  s.product_bandwidths = ProductBandwidths{gamma1, gamma2, gamma3};
  return s;
}

void WeightScheme::validate() const {
  if (a < 0.0 || b < 0.0 || c < 0.0) {
    raise(ErrorCode::InvalidArgument,
          "weight scheme coefficients a, b, c must be nonnegative");
  }
  if (!(floor > 0.0)) {
    raise(ErrorCode::InvalidArgument, "weight floor must be positive");
  }
  if (product_bandwidths) {
    const auto& pb = *product_bandwidths;
    if (!(pb.gamma1 > 0.0) || !(pb.gamma2 > 0.0) || !(pb.gamma3 > 0.0)) {
      raise(ErrorCode::InvalidArgument,
            "product bandwidths must be positive");
    }
  }
}

static double apply_combine(Combine combine, double lhs, double rhs) {
  return combine == Combine::Add ? lhs + rhs : lhs * rhs;
}

double rbf_product_weight(double gamma1, double gamma2, double gamma3,
                          std::span<const double> e_u,
                          std::span<const double> e_v,
                          std::span<const double> e_q, double floor) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(gamma3 > 0.0)) {
    raise(ErrorCode::InvalidArgument, "RBF bandwidths must be positive");
  }
  const double w = std::exp(-gamma1 * squared_distance(e_u, e_v)) *
                   std::exp(-gamma2 * squared_distance(e_u, e_q)) *
                   std::exp(-gamma3 * squared_distance(e_v, e_q));
  return std::max(floor, w);
}

QueryContext::QueryContext(const Graph& g, const WeightScheme& scheme,
                           std::vector<double> query_embedding)
    : graph_(&g), scheme_(scheme), query_(std::move(query_embedding)) {
  scheme_.validate();
  if (g.node_count() > 0 && query_.size() != g.dim()) {
    raise(ErrorCode::DimensionMismatch,
          "query embedding dimension " + std::to_string(query_.size()) +
          " does not match graph dimension " + std::to_string(g.dim()));
  }
  if (scheme_.product_bandwidths) {
    split_roles_ = scheme_.product_bandwidths->gamma2 !=
                   scheme_.product_bandwidths->gamma3;
  }
  clear_cache();
}

void QueryContext::clear_cache() {
  const std::size_t n = graph_->node_count();
  const std::size_t m = graph_->edge_count();
  edge_cache_.assign(m, 0.0);
  edge_cached_.assign(m, 0);
  degree_cache_.assign(n, 0.0);
  degree_cached_.assign(n, 0);
  nq_low_.assign(n, 0.0);
  nq_low_cached_.assign(n, 0);
  if (split_roles_) {
    nq_high_.assign(n, 0.0);
    nq_high_cached_.assign(n, 0);
  }
}

double QueryContext::node_query(NodeId v, bool high_role) {
  auto& cache = (high_role && split_roles_) ? nq_high_ : nq_low_;
  auto& flags = (high_role && split_roles_) ? nq_high_cached_ : nq_low_cached_;
  if (!flags[v]) {
    SimilarityKind sim = scheme_.node_query_sim;
    if (scheme_.product_bandwidths) {
      sim = SimilarityKind::rbf(high_role ? scheme_.product_bandwidths->gamma3
                                          : scheme_.product_bandwidths->gamma2);
    }
    cache[v] = similarity(sim, graph_->node(v).embedding, query_);
    flags[v] = 1;
  }
  return cache[v];
}

double QueryContext::edge_weight_by_index(std::uint32_t edge_index) {
  if (edge_index >= graph_->edge_count()) {
    raise(ErrorCode::InvalidArgument,
          "edge index " + std::to_string(edge_index) + " out of range");
  }
  if (edge_cached_[edge_index]) return edge_cache_[edge_index];

  const Edge& e = graph_->edge(edge_index);
  // Canonical low/high roles keep the weight independent of traversal
  // direction when the two query factors use different bandwidths.
  const NodeId lo = std::min(e.u, e.v);
  const NodeId hi = std::max(e.u, e.v);

  SimilarityKind uv_sim = scheme_.node_node_sim;
  if (scheme_.product_bandwidths) {
    uv_sim = SimilarityKind::rbf(scheme_.product_bandwidths->gamma1);
  }
  const double s_uv = similarity(uv_sim, graph_->node(lo).embedding,
                                 graph_->node(hi).embedding);
  const double s_uq = node_query(lo, /*high_role=*/false);
  const double s_vq = node_query(hi, /*high_role=*/true);

  double value = 0.0;
  switch (scheme_.variant) {
    case WeightScheme::Variant::Mean:
      value = (s_uv + s_uq + s_vq) / 3.0;
      break;
    case WeightScheme::Variant::Product:
      value = s_uv * s_uq * s_vq;
      break;
    case WeightScheme::Variant::Hybrid:
      value = s_uv * (scheme_.a + scheme_.b * (s_uq + s_vq));
      break;
    case WeightScheme::Variant::Generic:
      value = apply_combine(
          scheme_.combine, scheme_.c * s_uv,
          scheme_.a + scheme_.b * apply_combine(scheme_.combine, s_uq, s_vq));
      break;
  }
  const double w = std::max(scheme_.floor, e.base_weight * value);
  edge_cache_[edge_index] = w;
  edge_cached_[edge_index] = 1;
  return w;
}

double QueryContext::weighted_degree(NodeId v) {
  graph_->node(v);
  if (degree_cached_[v]) return degree_cache_[v];
  double sum = 0.0;
  for (const auto& entry : graph_->neighbors(v)) {
    sum += edge_weight_by_index(entry.edge_index);
  }
  degree_cache_[v] = sum;
  degree_cached_[v] = 1;
  return sum;
}

double edge_weight(QueryContext& ctx, NodeId u, NodeId v) {
  const auto idx = ctx.graph().find_edge(u, v);
  if (!idx) {
    raise(ErrorCode::NotAnEdge, "(" + std::to_string(u) + ", " +
                                    std::to_string(v) + ") is not an edge");
  }
  return ctx.edge_weight_by_index(*idx);
}

}  // namespace qafd
