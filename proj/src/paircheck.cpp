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

#include "paircheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "error.hpp"
#include "oracle.hpp"
#include "random.hpp"

namespace qafd {

PairedInstance make_paired_instance(std::uint64_t seed,
                                    std::uint32_t min_nodes,
                                    std::uint32_t max_nodes) {
  if (min_nodes < 2 || max_nodes < min_nodes) {
    raise(ErrorCode::InvalidArgument, "bad node range for paired instance");
  }
  auto rng = make_engine(derive_seed(seed, 0xA1));
  std::uniform_int_distribution<std::uint32_t> node_count_dist(min_nodes,
                                                               max_nodes);
  const std::uint32_t n = node_count_dist(rng);
  const std::size_t dim = 4;

  // Instance families rotate through the weight schemes.
  const int family = static_cast<int>(seed % 3);

  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<Node> nodes(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    nodes[v].id = v;
    nodes[v].label = "n" + std::to_string(v);
    nodes[v].embedding.resize(dim);
    for (auto& value : nodes[v].embedding) {
      // Family 0 checks pure structural weights via identical embeddings.
      value = family == 0 ? 0.25 : coord(rng);
    }
  }

  std::uniform_real_distribution<double> base_w(0.2, 2.0);
  std::set<std::pair<NodeId, NodeId>> present;
  std::vector<Edge> edges;
  // Random spanning tree keeps every instance connected.
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::uint32_t> parent_dist(0, v - 1);
    const NodeId parent = parent_dist(rng);
    edges.push_back({parent, v, family == 0 ? base_w(rng) : 1.0, ""});
    present.insert(std::minmax<NodeId>(parent, v));
  }
  std::uniform_int_distribution<std::uint32_t> node_dist(0, n - 1);
  const std::size_t extra = n / 2;
  for (std::size_t i = 0; i < extra; ++i) {
    const NodeId u = node_dist(rng);
    const NodeId v = node_dist(rng);
    if (u == v) continue;
    const auto key = std::minmax(u, v);
    if (!present.insert(key).second) continue;
    edges.push_back({key.first, key.second, family == 0 ? base_w(rng) : 1.0,
                     ""});
  }

  PairedInstance inst{Graph::build(std::move(nodes), std::move(edges)),
                      WeightScheme{},
                      {},
                      DiffusionConfig{},
                      {}};

  switch (family) {
    case 0:
      // Identical embeddings make the RBF factors 1, so the realized
      // weight is exactly the random structural base weight.
      inst.scheme = WeightScheme::product_rbf(0.5, 0.5, 0.5);
      break;
    case 1:
      inst.scheme = WeightScheme::hybrid(1.0, 0.25);
      inst.scheme.node_node_sim = SimilarityKind::rbf(0.25);
      inst.scheme.node_query_sim = SimilarityKind::rbf(0.25);
      break;
    default:
      inst.scheme = WeightScheme::product_rbf(0.05, 0.08, 0.06);
      break;
  }

  inst.query.resize(dim);
  for (auto& value : inst.query) {
    value = family == 0 ? 0.25 : coord(rng);
  }

  std::uniform_real_distribution<double> sink_dist(1.0, 2.0);
  std::vector<double> sinks(n);
  double total_sink = 0.0;
  for (auto& t : sinks) {
    t = sink_dist(rng);
    total_sink += t;
  }

  std::uniform_int_distribution<std::size_t> seed_count_dist(1, 3);
  std::uniform_real_distribution<double> boost(2.0, 6.0);
  const std::size_t seed_count = seed_count_dist(rng);
  std::vector<double> sources(n, 0.0);
  std::set<NodeId> chosen;
  double total_source = 0.0;
  for (std::size_t i = 0; i < seed_count; ++i) {
    NodeId s = node_dist(rng);
    while (chosen.count(s)) s = node_dist(rng);
    chosen.insert(s);
    const double mass = std::min(boost(rng) * sinks[s],
                                 0.55 * total_sink - total_source);
    if (mass <= sinks[s]) break;  // keep capacity strictly exceeded
    sources[s] = mass;
    total_source += mass;
    inst.seeds.push_back(s);
  }
  if (inst.seeds.empty()) {
    const NodeId s = *chosen.begin();
    sources[s] = std::min(1.5 * sinks[s], 0.5 * total_sink);
    inst.seeds.push_back(s);
  }
  std::sort(inst.seeds.begin(), inst.seeds.end());

  inst.config.sink_mode = DiffusionConfig::Sink::Explicit;
  inst.config.explicit_sinks = std::move(sinks);
  inst.config.source_mode = DiffusionConfig::Source::Explicit;
  inst.config.explicit_sources = std::move(sources);
  inst.config.rng_seed = derive_seed(seed, 0xB2);
  inst.config.trace = DiffusionConfig::Trace::EveryPush;
  return inst;
}

PairedRun run_paired_check(std::uint64_t seed, double diffusion_epsilon,
                           double objective_tolerance,
                           std::uint32_t min_nodes, std::uint32_t max_nodes) {
  PairedInstance inst = make_paired_instance(seed, min_nodes, max_nodes);
  DiffusionConfig cfg = inst.config;
  cfg.epsilon = diffusion_epsilon;

  QueryContext ctx(inst.graph, inst.scheme, inst.query);
  DiffusionResult res = diffuse(ctx, inst.seeds, cfg);

  PairedRun run;
  run.instance_seed = seed;
  run.nodes = static_cast<std::uint32_t>(inst.graph.node_count());
  run.objective_solver = dual_objective(ctx, res.x, res.sinks, res.sources);

  QueryContext oracle_ctx(inst.graph, inst.scheme, inst.query);
  const DenseDual dd = assemble_dense(oracle_ctx, res.sinks, res.sources);
  const QpSolution sol = solve_nonneg_qp(dd, 1e-12);
  run.objective_oracle = sol.objective;
  run.abs_diff = std::abs(run.objective_solver - run.objective_oracle);
  run.objective_ok =
      run.abs_diff <= std::max(objective_tolerance,
                               objective_tolerance *
                                   std::abs(run.objective_oracle));

  // Lemma-style locality: every node the diffusion ever raised must lie in
  // the reference support. Importance is monotone, so the touch order
  // covers every iterate's support.
  constexpr double kOracleSupportThreshold = 1e-8;
  run.locality_ok = true;
  for (NodeId v : res.report.touch_order) {
    if (!(sol.x[v] > kOracleSupportThreshold)) {
      run.locality_ok = false;
      break;
    }
  }
  run.source_l1 = 0.0;
  for (double d : res.sources) run.source_l1 += d;
  std::size_t oracle_support = 0;
  for (double xv : sol.x) {
    if (xv > kOracleSupportThreshold) ++oracle_support;
  }
  run.support_size = oracle_support;
  run.size_bound_ok =
      static_cast<double>(oracle_support) <= run.source_l1 + 1e-12;

  run.conservation_ok = true;
  run.descent_ok = true;
  run.monotone_ok = true;
  double prev_objective = std::numeric_limits<double>::infinity();
  for (const TraceEntry& entry : res.report.trace) {
    if (std::abs(entry.mass_sum - run.source_l1) >
        1e-9 * std::max(1.0, run.source_l1)) {
      run.conservation_ok = false;
    }
    if (entry.objective > prev_objective + 1e-12) run.descent_ok = false;
    prev_objective = entry.objective;
    if (entry.pushed_node != UINT32_MAX && !(entry.delta_x > 0.0)) {
      run.monotone_ok = false;
    }
  }

  // Gradient identity at the start, midpoint and end of the run.
  {
    std::vector<double> x0(inst.graph.node_count(), 0.0);
    run.grad_residual_start =
        gradient_mass_identity(ctx, x0, res.sources, res.sources);

    DiffusionConfig half = cfg;
    half.max_iterations = std::max<std::uint64_t>(1, res.report.iterations / 2);
    QueryContext mid_ctx(inst.graph, inst.scheme, inst.query);
    DiffusionResult mid = diffuse(mid_ctx, inst.seeds, half);
    run.grad_residual_mid =
        gradient_mass_identity(mid_ctx, mid.x, mid.m, mid.sources);

    run.grad_residual_end = gradient_mass_identity(ctx, res.x, res.m,
                                                   res.sources);
  }
  return run;
}

}  // namespace qafd
