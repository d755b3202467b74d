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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace qafd {

DenseDual assemble_dense(QueryContext& ctx, const std::vector<double>& sinks,
                         const std::vector<double>& sources,
                         std::size_t cap) {
  const Graph& g = ctx.graph();
  const std::size_t n = g.node_count();
  if (n > cap) {
    raise(ErrorCode::TooLarge,
          "dense assembly capped at " + std::to_string(cap) + " nodes, got " +
              std::to_string(n));
  }
  if (sinks.size() != n || sources.size() != n) {
    raise(ErrorCode::InvalidArgument,
          "sink/source vectors must match the node count");
  }

  DenseDual dd;
  dd.n = n;
  dd.laplacian.assign(n * n, 0.0);
  dd.linear.resize(n);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    const double w = ctx.edge_weight_by_index(static_cast<std::uint32_t>(i));
    dd.laplacian[e.u * n + e.u] += w;
    dd.laplacian[e.v * n + e.v] += w;
    dd.laplacian[e.u * n + e.v] -= w;
    dd.laplacian[e.v * n + e.u] -= w;
  }
  for (std::size_t v = 0; v < n; ++v) dd.linear[v] = sinks[v] - sources[v];
  return dd;
}

double dense_objective(const DenseDual& dd, const std::vector<double>& x) {
  double quad = 0.0;
  for (std::size_t i = 0; i < dd.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < dd.n; ++j) row += dd.at(i, j) * x[j];
    quad += x[i] * row;
  }
  double linear = 0.0;
  for (std::size_t i = 0; i < dd.n; ++i) linear += x[i] * dd.linear[i];
  return 0.5 * quad + linear;
}

static std::vector<double> gradient(const DenseDual& dd,
                                    const std::vector<double>& x) {
  std::vector<double> grad(dd.n);
  for (std::size_t i = 0; i < dd.n; ++i) {
    double row = dd.linear[i];
    for (std::size_t j = 0; j < dd.n; ++j) row += dd.at(i, j) * x[j];
    grad[i] = row;
  }
  return grad;
}

double kkt_residual(const DenseDual& dd, const std::vector<double>& x) {
  const auto grad = gradient(dd, x);
  double worst = 0.0;
  for (std::size_t i = 0; i < dd.n; ++i) {
    worst = std::max(worst, std::abs(std::min(x[i], grad[i])));
  }
  return worst;
}

QpSolution solve_nonneg_qp(const DenseDual& dd, double tol) {
  if (!(tol > 0.0)) {
    raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  }
  const std::size_t n = dd.n;
  for (std::size_t v = 0; v < n; ++v) {
    if (dd.at(v, v) == 0.0 && dd.linear[v] < 0.0) {
      raise(ErrorCode::InvalidArgument,
            "objective unbounded: isolated node " + std::to_string(v) +
                " has negative linear coefficient");
    }
  }

  QpSolution sol;
  sol.x.assign(n, 0.0);
  // grad = L x + linear, maintained incrementally across updates.
  std::vector<double> grad = dd.linear;

  constexpr std::size_t kStallLimit = 10000;
  double best_residual = std::numeric_limits<double>::infinity();
  std::size_t stalled = 0;

  while (true) {
    ++sol.sweeps;
    for (std::size_t v = 0; v < n; ++v) {
      const double lvv = dd.at(v, v);
      if (lvv == 0.0) continue;
      const double target = std::max(0.0, sol.x[v] - grad[v] / lvv);
      const double delta = target - sol.x[v];
      if (delta == 0.0) continue;
      sol.x[v] = target;
      for (std::size_t j = 0; j < n; ++j) grad[j] += delta * dd.at(v, j);
    }

    double residual = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      residual = std::max(residual, std::abs(std::min(sol.x[v], grad[v])));
    }
    if (residual <= tol) break;
    if (residual < best_residual * (1.0 - 1e-12)) {
      best_residual = residual;
      stalled = 0;
    } else if (++stalled >= kStallLimit) {
      raise(ErrorCode::NoProgress,
            "coordinate descent stalled at residual " +
                std::to_string(residual));
    }
  }

  sol.objective = dense_objective(dd, sol.x);
  sol.kkt_residual = kkt_residual(dd, sol.x);
  return sol;
}

}  // namespace qafd
