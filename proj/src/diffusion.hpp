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
#include <vector>

#include "graph.hpp"
#include "weighting.hpp"

namespace qafd {

/// Configuration for one diffusion run.
///
/// The run injects source mass at seed nodes and repeatedly settles nodes
/// whose mass exceeds their sink capacity, raising the node's importance
/// x_v and spreading the excess to neighbors in proportion to query-aware
/// edge weights. It stops when total excess falls to `epsilon` (checked
/// every `check_cadence` pushes) or at `max_iterations`.
struct DiffusionConfig {
  enum class Sink { Degree, Uniform, Explicit };
  enum class Source { AlphaTimesTotalSink, Explicit, RecoveryMass };
  enum class Selection { UniformRandom, Fifo };
  enum class Trace { None, Cadence, EveryPush };

  double alpha = 50.0;
  Sink sink_mode = Sink::Degree;
  double uniform_capacity = 1.0;
  std::vector<double> explicit_sinks;

  Source source_mode = Source::AlphaTimesTotalSink;
  std::vector<double> explicit_sources;
  double recovery_beta = 0.5;
  double recovery_target_total = 0.0;

  double epsilon = 0.05;
  std::uint64_t max_iterations = 1000000;
  std::uint64_t check_cadence = 100;
  Selection selection = Selection::UniformRandom;
  std::uint64_t rng_seed = 0;
  double support_threshold = 1e-8;
  Trace trace = Trace::Cadence;

  void validate() const;
};

struct TraceEntry {
  std::uint64_t iteration = 0;
  double objective = 0.0;
  double total_excess = 0.0;
  double mass_sum = 0.0;
  /// Pushed node and its importance increment; unset (node == UINT32_MAX)
  /// for cadence samples.
  NodeId pushed_node = UINT32_MAX;
  double delta_x = 0.0;
};

enum class Termination { Converged, IterationCap };

struct ConvergenceReport {
  std::uint64_t iterations = 0;
  Termination terminated_by = Termination::Converged;
  double final_total_excess = 0.0;
  /// Largest query-aware weighted degree among pushed nodes.
  double gamma_hat = 0.0;
  /// Smallest query-aware weight among edges touched by a push.
  double eta_hat = 0.0;
  std::vector<TraceEntry> trace;
  /// Nodes that kept excess mass because they have no neighbors.
  std::vector<NodeId> absorbed;
  /// Nodes in the order they first gained positive importance. Importance
  /// never decreases, so every iterate's support is a prefix of this list.
  std::vector<NodeId> touch_order;
};

struct DiffusionResult {
  std::vector<double> x;  // node importance, >= 0
  std::vector<double> m;  // final mass
  std::vector<double> sinks;    // realized T
  std::vector<double> sources;  // realized source injection
  /// Nodes with x above the support threshold, ascending ids.
  std::vector<NodeId> support;
  ConvergenceReport report;
};

/// Runs the diffusion. `seeds` may be empty when the source mode is
/// Explicit; otherwise at least one seed is required.
DiffusionResult diffuse(QueryContext& ctx, const std::vector<NodeId>& seeds,
                        const DiffusionConfig& cfg);

/// F(x) = 1/2 sum_edges w(q,u,v) (x_u - x_v)^2 + sum_v x_v (T_v - delta_v),
/// evaluated by edge traversal. Edge weights are only computed where the
/// quadratic term is nonzero, so the evaluation stays local.
double dual_objective(QueryContext& ctx, const std::vector<double>& x,
                      const std::vector<double>& sinks,
                      const std::vector<double>& sources);

/// Max-norm residual of the tracked mass against delta - L(q) x recomputed
/// from scratch.
double gradient_mass_identity(QueryContext& ctx, const std::vector<double>& x,
                              const std::vector<double>& m,
                              const std::vector<double>& sources);

struct EdgeFlow {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  double flow = 0.0;  // w(q,u,v) * (x_u - x_v), positive toward v
};

/// Implied flows on edges with distinct endpoint importances.
std::vector<EdgeFlow> extract_flows(QueryContext& ctx,
                                    const std::vector<double>& x);

/// Resolved sink and source vectors for a configuration, exposed so
/// reference solvers can share them with the diffusion.
std::vector<double> resolve_sinks(const Graph& g, const DiffusionConfig& cfg);
std::vector<double> resolve_sources(const Graph& g,
                                    const std::vector<NodeId>& seeds,
                                    const std::vector<double>& sinks,
                                    const DiffusionConfig& cfg);

}  // namespace qafd
