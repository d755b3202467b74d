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

#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <set>
#include <thread>

#include "embedding.hpp"
#include "error.hpp"
#include "random.hpp"
#include "seeding.hpp"
#include "weighting.hpp"

namespace qafd {

void SynthModelParams::set_uniform_sigma(double sigma) {
  sigmas.assign(d, sigma);
}

void SynthModelParams::validate() const {
  if (n == 0 || r_k == 0 || r_k > n) {
    raise(ErrorCode::InvalidArgument, "need 1 <= r_k <= n");
  }
  for (double p : {rho1, rho2, background}) {
    if (p < 0.0 || p > 1.0) {
      raise(ErrorCode::InvalidArgument,
            "edge probabilities must lie in [0, 1]");
    }
  }
  if (d == 0 || sigmas.size() != d) {
    raise(ErrorCode::InvalidArgument,
          "noise scales must match the embedding dimension");
  }
  for (double s : sigmas) {
    if (s < 0.0) {
      raise(ErrorCode::InvalidArgument, "noise scales must be nonnegative");
    }
  }
  const double sigma_hat = *std::max_element(sigmas.begin(), sigmas.end());
  if (sigma_hat > 0.0 && !(mu_gap > 0.0)) {
    raise(ErrorCode::InvalidArgument,
          "mu_gap must be positive when noise is present");
  }
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(gamma3 > 0.0)) {
    raise(ErrorCode::InvalidArgument, "bandwidths must be positive");
  }
  if (!(beta > 0.0)) {
    raise(ErrorCode::InvalidArgument, "beta must be positive");
  }
}

SynthModelParams SynthModelParams::acceptance_regime() {
  SynthModelParams p;
  p.n = 200;
  p.r_k = 10;
  p.rho1 = 0.6;
  p.rho2 = 0.05;
  p.background = 0.02;
  p.d = 32;
  p.mu_gap = 4.0;
  p.set_uniform_sigma(0.025);
  p.gamma1 = p.gamma2 = p.gamma3 = 0.5;
  p.beta = 0.5;
  return p;
}

// Random orthonormal frame via Gram-Schmidt on Gaussian vectors.
static std::vector<std::vector<double>> random_frame(std::mt19937_64& rng,
                                                     std::size_t d,
                                                     std::size_t count) {
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> frame;
  while (frame.size() < count) {
    std::vector<double> v(d);
    for (auto& value : v) value = unit(rng);
    for (const auto& prev : frame) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += v[i] * prev[i];
      for (std::size_t i = 0; i < d; ++i) v[i] -= dot * prev[i];
    }
    double norm = 0.0;
    for (double value : v) norm += value * value;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;  // collinear draw, retry
    for (auto& value : v) value /= norm;
    frame.push_back(std::move(v));
  }
  return frame;
}

SynthInstance generate_instance(const SynthModelParams& p) {
  p.validate();
  auto rng = make_engine(derive_seed(p.seed, 0x51));

  // Planted relevant subset.
  std::vector<NodeId> ids(p.n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<NodeId> relevant(ids.begin(), ids.begin() + p.r_k);
  std::sort(relevant.begin(), relevant.end());
  std::vector<char> in_plant(p.n, 0);
  for (NodeId v : relevant) in_plant[v] = 1;

  // Means: the query mean at the origin, irrelevant means at distance
  // mu_gap along a random orthonormal frame (round-robin assignment).
  const std::size_t frame_size = std::min<std::size_t>(p.d, 8);
  auto frame = random_frame(rng, p.d, frame_size);
  std::vector<std::vector<double>> means;
  means.push_back(std::vector<double>(p.d, 0.0));  // index 0: planted/query
  for (std::size_t i = 0; i < frame.size(); ++i) {
    std::vector<double> mu(p.d);
    for (std::size_t l = 0; l < p.d; ++l) mu[l] = p.mu_gap * frame[i][l];
    means.push_back(std::move(mu));
  }

  std::vector<std::size_t> assignment(p.n);
  std::size_t irrelevant_rank = 0;
  for (std::uint32_t v = 0; v < p.n; ++v) {
    if (in_plant[v]) {
      assignment[v] = 0;
    } else {
      assignment[v] = 1 + (irrelevant_rank % frame.size());
      ++irrelevant_rank;
    }
  }

  auto vectors = sample_embeddings(derive_seed(p.seed, 0x52), means,
                                   p.sigmas, assignment);
  // The query uses the planted mean with its own noise draw.
  auto query_vec = sample_embeddings(derive_seed(p.seed, 0x53), means,
                                     p.sigmas, {0});

  std::vector<Node> nodes(p.n);
  for (std::uint32_t v = 0; v < p.n; ++v) {
    nodes[v].id = v;
    nodes[v].label = "n" + std::to_string(v);
    nodes[v].embedding = std::move(vectors[v]);
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::uint32_t u = 0; u < p.n; ++u) {
    for (std::uint32_t v = u + 1; v < p.n; ++v) {
      double prob;
      if (in_plant[u] && in_plant[v]) {
        prob = p.rho1;
      } else if (in_plant[u] || in_plant[v]) {
        prob = p.rho2;
      } else {
        prob = p.background;
      }
      if (coin(rng) < prob) edges.push_back({u, v, 1.0, ""});
    }
  }

  return SynthInstance{Graph::build(std::move(nodes), std::move(edges)),
                       std::move(query_vec[0]), std::move(relevant)};
}

// Union-find connectivity check restricted to plant-internal edges.
static bool plant_connected(const Graph& g, const std::vector<NodeId>& plant) {
  if (plant.empty()) return true;
  std::vector<NodeId> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<char> in_plant(g.node_count(), 0);
  for (NodeId v : plant) in_plant[v] = 1;
  auto find = [&parent](NodeId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const Edge& e : g.edges()) {
    if (in_plant[e.u] && in_plant[e.v]) {
      parent[find(e.u)] = find(e.v);
    }
  }
  const NodeId root = find(plant.front());
  for (NodeId v : plant) {
    if (find(v) != root) return false;
  }
  return true;
}

DiffusionConfig recovery_trial_config() {
  DiffusionConfig cfg;
  cfg.sink_mode = DiffusionConfig::Sink::Degree;
  cfg.source_mode = DiffusionConfig::Source::RecoveryMass;
  cfg.epsilon = 0.05;
  cfg.max_iterations = 1000000;
  cfg.check_cadence = 100;
  cfg.selection = DiffusionConfig::Selection::UniformRandom;
  cfg.support_threshold = 1e-8;
  cfg.trace = DiffusionConfig::Trace::None;
  return cfg;
}

RecoveryOutcome run_recovery_trial(const SynthModelParams& p,
                                   const DiffusionConfig& cfg_in) {
  SynthInstance inst = generate_instance(p);
  const Graph& g = inst.graph;

  RecoveryOutcome out;
  out.trial_seed = p.seed;
  out.plant_connected = plant_connected(g, inst.relevant);

  WeightScheme scheme =
      WeightScheme::product_rbf(p.gamma1, p.gamma2, p.gamma3);
  QueryContext ctx(g, scheme, inst.query_embedding);

  // Seed: top scorer against the query embedding under the node-query
  // kernel; with a healthy signal-to-noise ratio it lands in the plant.
  KeywordSet kw{{"query"}, {inst.query_embedding}};
  NodeScores scored = score_nodes(g, kw, SimilarityKind::rbf(p.gamma2));
  SeedSelection sel = select_seeds(std::move(scored.scores), 1);

  DiffusionConfig cfg = cfg_in;
  cfg.source_mode = DiffusionConfig::Source::RecoveryMass;
  cfg.recovery_beta = p.beta;
  cfg.rng_seed = derive_seed(p.seed, 0x61);
  const std::vector<double> sinks = resolve_sinks(g, cfg);
  double plant_capacity = 0.0;
  for (NodeId v : inst.relevant) plant_capacity += sinks[v];
  cfg.recovery_target_total = plant_capacity;

  DiffusionResult res = diffuse(ctx, sel.seeds, cfg);
  out.converged = res.report.terminated_by == Termination::Converged;
  out.iterations = res.report.iterations;
  out.support_size = static_cast<std::uint32_t>(res.support.size());

  std::vector<char> in_plant(g.node_count(), 0);
  for (NodeId v : inst.relevant) in_plant[v] = 1;
  out.full_recovery = true;
  for (NodeId v : inst.relevant) {
    if (!(res.x[v] > cfg.support_threshold)) {
      out.full_recovery = false;
      break;
    }
  }
  double outside_capacity = 0.0;
  for (NodeId v : res.support) {
    if (!in_plant[v]) outside_capacity += sinks[v];
  }
  out.leakage_ratio =
      plant_capacity > 0.0 ? outside_capacity / plant_capacity : 0.0;

  for (const Edge& e : g.edges()) {
    const bool pu = in_plant[e.u];
    const bool pv = in_plant[e.v];
    if (pu && pv) {
      out.within_weights.push_back(edge_weight(ctx, e.u, e.v));
    } else if (pu || pv) {
      out.boundary_weights.push_back(edge_weight(ctx, e.u, e.v));
    }
  }
  return out;
}

static double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double upper = values[mid];
  if (values.size() % 2 == 0) {
    const double lower =
        *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
  }
  return upper;
}

double RecoverySummary::leakage_quantile(double q) const {
  if (leakage_sorted.empty()) return 0.0;
  q = std::clamp(q, 0.0, 1.0);
  const auto idx = static_cast<std::size_t>(
      q * static_cast<double>(leakage_sorted.size() - 1) + 0.5);
  return leakage_sorted[idx];
}

RecoverySummary run_recovery_suite(const SynthModelParams& p,
                                   std::uint32_t trials,
                                   const DiffusionConfig& cfg,
                                   std::uint32_t threads) {
  if (trials == 0) {
    raise(ErrorCode::InvalidArgument, "need at least one trial");
  }
  RecoverySummary summary;
  summary.trials.resize(trials);

  auto run_range = [&](std::uint32_t begin, std::uint32_t end) {
    for (std::uint32_t i = begin; i < end; ++i) {
      SynthModelParams trial_params = p;
      trial_params.seed = derive_seed(p.seed, i);
      summary.trials[i] = run_recovery_trial(trial_params, cfg);
    }
  };

  std::uint32_t workers = threads == 0
                              ? std::max(1u, std::thread::hardware_concurrency())
                              : threads;
  workers = std::min(workers, trials);
  if (workers <= 1) {
    run_range(0, trials);
  } else {
    std::vector<std::future<void>> futures;
    const std::uint32_t chunk = (trials + workers - 1) / workers;
    for (std::uint32_t w = 0; w < workers; ++w) {
      const std::uint32_t begin = w * chunk;
      const std::uint32_t end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      futures.push_back(
          std::async(std::launch::async, run_range, begin, end));
    }
    for (auto& f : futures) f.get();
  }

  std::vector<double> within, boundary;
  std::uint32_t recovered = 0, leakage_ok = 0, connected = 0;
  for (const RecoveryOutcome& t : summary.trials) {
    if (t.full_recovery) ++recovered;
    if (t.leakage_ratio <= p.beta) ++leakage_ok;
    if (t.plant_connected) ++connected;
    summary.leakage_sorted.push_back(t.leakage_ratio);
    within.insert(within.end(), t.within_weights.begin(),
                  t.within_weights.end());
    boundary.insert(boundary.end(), t.boundary_weights.begin(),
                    t.boundary_weights.end());
  }
  std::sort(summary.leakage_sorted.begin(), summary.leakage_sorted.end());
  const double count = static_cast<double>(trials);
  summary.recovery_rate = recovered / count;
  summary.leakage_ok_rate = leakage_ok / count;
  summary.connected_rate = connected / count;
  summary.median_within_weight = median_of(std::move(within));
  summary.median_boundary_weight = median_of(std::move(boundary));
  return summary;
}

}  // namespace qafd
