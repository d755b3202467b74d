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

namespace qafd {

/// Contextual random-graph model: a planted relevant set R of size r_k
/// whose pairs connect with probability rho1, boundary pairs with rho2,
/// and remaining pairs with the background probability. Relevant nodes and
/// the query share one planted mean; irrelevant nodes get means at distance
/// mu_gap on a random orthogonal frame. All embeddings add independent
/// Gaussian coordinate noise with scale sigma_l.
struct SynthModelParams {
  std::uint32_t n = 200;
  std::uint32_t r_k = 10;
  double rho1 = 0.6;
  double rho2 = 0.05;
  double background = 0.02;
  std::uint32_t d = 32;
  double mu_gap = 4.0;
  std::vector<double> sigmas;  // size d; uniform helper below
  double gamma1 = 0.5, gamma2 = 0.5, gamma3 = 0.5;
  double beta = 0.5;
  std::uint64_t seed = 0;

  void set_uniform_sigma(double sigma);
  void validate() const;

  /// Desk-scale regime used by the verification experiments.
  static SynthModelParams acceptance_regime();
};

struct SynthInstance {
  Graph graph;
  std::vector<double> query_embedding;
  std::vector<NodeId> relevant;  // sorted ascending
};

SynthInstance generate_instance(const SynthModelParams& p);

struct RecoveryOutcome {
  std::uint64_t trial_seed = 0;
  bool full_recovery = false;  // relevant set inside the support
  double leakage_ratio = 0.0;  // capacity outside R over capacity of R
  std::uint32_t support_size = 0;
  bool plant_connected = false;
  bool converged = false;
  std::uint64_t iterations = 0;
  /// Realized query-aware weights on edges inside R and on boundary edges.
  std::vector<double> within_weights;
  std::vector<double> boundary_weights;
};

/// One planted-recovery trial: product/RBF weights, degree sinks, source
/// mass (1+beta) * capacity(R) at the top-scoring seed inside the instance.
RecoveryOutcome run_recovery_trial(const SynthModelParams& p,
                                   const DiffusionConfig& cfg);

struct RecoverySummary {
  std::vector<RecoveryOutcome> trials;
  double recovery_rate = 0.0;
  double leakage_ok_rate = 0.0;  // fraction with leakage <= beta
  double connected_rate = 0.0;
  double median_within_weight = 0.0;
  double median_boundary_weight = 0.0;
  std::vector<double> leakage_sorted;

  double leakage_quantile(double q) const;
};

/// Default diffusion configuration for recovery trials.
DiffusionConfig recovery_trial_config();

/// Runs `trials` independent trials; each derives its own stream from
/// (p.seed, trial index), so any thread count produces the same summary.
/// `threads` 0 uses the hardware concurrency.
RecoverySummary run_recovery_suite(const SynthModelParams& p,
                                   std::uint32_t trials,
                                   const DiffusionConfig& cfg,
                                   std::uint32_t threads = 0);

}  // namespace qafd
