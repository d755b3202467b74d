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

#include "diffusion.hpp"
#include "graph.hpp"
#include "weighting.hpp"

namespace qafd {

/// Randomized connected test instance: a spanning tree plus extra edges,
/// sink capacities in [1, 2], and source mass concentrated on a few seeds
/// so that capacity is exceeded there but total capacity still dominates
/// total mass. Instance families alternate between structural base
/// weights, hybrid RBF weights and product RBF weights.
struct PairedInstance {
  Graph graph;
  WeightScheme scheme;
  std::vector<double> query;
  DiffusionConfig config;  // explicit sinks/sources filled in
  std::vector<NodeId> seeds;
};

PairedInstance make_paired_instance(std::uint64_t seed,
                                    std::uint32_t min_nodes,
                                    std::uint32_t max_nodes);

/// Outcome of running both solvers on one instance, with the invariants
/// used by the verification suites already evaluated.
struct PairedRun {
  std::uint64_t instance_seed = 0;
  std::uint32_t nodes = 0;
  double objective_solver = 0.0;
  double objective_oracle = 0.0;
  double abs_diff = 0.0;
  bool objective_ok = false;

  bool locality_ok = false;    // every touched node inside oracle support
  bool size_bound_ok = false;  // |support| <= total source mass
  double source_l1 = 0.0;
  std::size_t support_size = 0;

  bool conservation_ok = false;  // per-push mass sum matches ||delta||_1
  bool descent_ok = false;       // per-push objective never increases
  bool monotone_ok = false;      // per-push importance increments positive

  double grad_residual_start = 0.0;
  double grad_residual_mid = 0.0;
  double grad_residual_end = 0.0;
};

/// Runs the diffusion (stopping threshold `diffusion_epsilon`, per-push
/// tracing) and the dense reference solver, then fills every check field.
/// `objective_tolerance` is applied as max(tol, tol * |F_oracle|).
PairedRun run_paired_check(std::uint64_t seed, double diffusion_epsilon,
                           double objective_tolerance,
                           std::uint32_t min_nodes = 5,
                           std::uint32_t max_nodes = 50);

}  // namespace qafd
