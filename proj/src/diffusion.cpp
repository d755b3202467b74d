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

#include "diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "error.hpp"
#include "random.hpp"

namespace qafd {

void DiffusionConfig::validate() const {
  if (!(alpha > 0.0)) {
    raise(ErrorCode::InvalidArgument, "alpha must be positive");
  }
  if (!(epsilon > 0.0)) {
    raise(ErrorCode::InvalidArgument, "epsilon must be positive");
  }
  if (max_iterations < 1) {
    raise(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  }
  if (check_cadence < 1) {
    raise(ErrorCode::InvalidArgument, "check_cadence must be at least 1");
  }
  if (support_threshold < 0.0) {
    raise(ErrorCode::InvalidArgument, "support threshold must be >= 0");
  }
  if (sink_mode == Sink::Uniform && !(uniform_capacity > 0.0)) {
    raise(ErrorCode::InvalidArgument, "uniform capacity must be positive");
  }
  if (source_mode == Source::RecoveryMass && !(recovery_beta > 0.0)) {
    raise(ErrorCode::InvalidArgument, "recovery beta must be positive");
  }
}

std::vector<double> resolve_sinks(const Graph& g, const DiffusionConfig& cfg) {
  const std::size_t n = g.node_count();
  std::vector<double> sinks(n, 0.0);
  switch (cfg.sink_mode) {
    case DiffusionConfig::Sink::Degree:
      for (std::size_t v = 0; v < n; ++v) {
        sinks[v] = static_cast<double>(g.degree(static_cast<NodeId>(v)));
      }
      break;
    case DiffusionConfig::Sink::Uniform:
      std::fill(sinks.begin(), sinks.end(), cfg.uniform_capacity);
      break;
    case DiffusionConfig::Sink::Explicit:
      if (cfg.explicit_sinks.size() != n) {
        raise(ErrorCode::InvalidArgument,
              "explicit sink vector has wrong length");
      }
      sinks = cfg.explicit_sinks;
      for (double t : sinks) {
        if (t < 0.0 || !std::isfinite(t)) {
          raise(ErrorCode::InvalidArgument,
                "sink capacities must be finite and nonnegative");
        }
      }
      break;
  }
  return sinks;
}

std::vector<double> resolve_sources(const Graph& g,
                                    const std::vector<NodeId>& seeds,
                                    const std::vector<double>& sinks,
                                    const DiffusionConfig& cfg) {
  const std::size_t n = g.node_count();
  std::vector<double> sources(n, 0.0);
  switch (cfg.source_mode) {
    case DiffusionConfig::Source::AlphaTimesTotalSink: {
      if (seeds.empty()) {
        raise(ErrorCode::NoSeeds, "no seed nodes supplied");
      }
      const double total =
          std::accumulate(sinks.begin(), sinks.end(), 0.0);
      for (NodeId s : seeds) {
        g.node(s);
        sources[s] = cfg.alpha * total;
      }
      break;
    }
    case DiffusionConfig::Source::Explicit: {
      if (cfg.explicit_sources.size() != n) {
        raise(ErrorCode::InvalidArgument,
              "explicit source vector has wrong length");
      }
      sources = cfg.explicit_sources;
      double total = 0.0;
      for (double d : sources) {
        if (d < 0.0 || !std::isfinite(d)) {
          raise(ErrorCode::InvalidArgument,
                "source masses must be finite and nonnegative");
        }
        total += d;
      }
      if (!(total > 0.0)) {
        raise(ErrorCode::NoSeeds, "explicit source vector carries no mass");
      }
      break;
    }
    case DiffusionConfig::Source::RecoveryMass: {
      if (seeds.empty()) {
        raise(ErrorCode::NoSeeds, "no seed nodes supplied");
      }
      const double total =
          (1.0 + cfg.recovery_beta) * cfg.recovery_target_total;
      if (!(total > 0.0)) {
        raise(ErrorCode::InvalidArgument,
              "recovery target capacity must be positive");
      }
      const double each = total / static_cast<double>(seeds.size());
      for (NodeId s : seeds) {
        g.node(s);
        sources[s] += each;
      }
      break;
    }
  }
  return sources;
}

namespace {

// Active set with O(1) insert/remove and uniform sampling.
class ActiveSet {
 public:
  explicit ActiveSet(std::size_t n) : position_(n, -1) {}

  bool contains(NodeId v) const { return position_[v] >= 0; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const std::vector<NodeId>& items() const { return items_; }

  void insert(NodeId v) {
    if (contains(v)) return;
    position_[v] = static_cast<std::int64_t>(items_.size());
    items_.push_back(v);
  }

  void remove(NodeId v) {
    const auto pos = position_[v];
    if (pos < 0) return;
    const NodeId last = items_.back();
    items_[static_cast<std::size_t>(pos)] = last;
    position_[last] = pos;
    items_.pop_back();
    position_[v] = -1;
  }

  NodeId at(std::size_t index) const { return items_[index]; }

 private:
  std::vector<NodeId> items_;
  std::vector<std::int64_t> position_;
};

}  // namespace

double dual_objective(QueryContext& ctx, const std::vector<double>& x,
                      const std::vector<double>& sinks,
                      const std::vector<double>& sources) {
  const Graph& g = ctx.graph();
  if (x.size() != g.node_count()) {
    raise(ErrorCode::InvalidArgument, "importance vector has wrong length");
  }
  for (double xv : x) {
    if (xv < 0.0) {
      raise(ErrorCode::InvalidArgument,
            "importance vector must be nonnegative");
    }
  }
  double quad = 0.0;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    const double diff = x[e.u] - x[e.v];
    if (diff == 0.0) continue;
    quad += ctx.edge_weight_by_index(static_cast<std::uint32_t>(i)) * diff *
            diff;
  }
  double linear = 0.0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] != 0.0) linear += x[v] * (sinks[v] - sources[v]);
  }
  return 0.5 * quad + linear;
}

double gradient_mass_identity(QueryContext& ctx, const std::vector<double>& x,
                              const std::vector<double>& m,
                              const std::vector<double>& sources) {
  const Graph& g = ctx.graph();
  double worst = 0.0;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    double lap = 0.0;
    for (const auto& entry : g.neighbors(static_cast<NodeId>(v))) {
      const double diff = x[v] - x[entry.neighbor];
      if (diff == 0.0) continue;
      lap += ctx.edge_weight_by_index(entry.edge_index) * diff;
    }
    worst = std::max(worst, std::abs(m[v] - (sources[v] - lap)));
  }
  return worst;
}

std::vector<EdgeFlow> extract_flows(QueryContext& ctx,
                                    const std::vector<double>& x) {
  const Graph& g = ctx.graph();
  std::vector<EdgeFlow> flows;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edge(i);
    const NodeId lo = std::min(e.u, e.v);
    const NodeId hi = std::max(e.u, e.v);
    const double diff = x[lo] - x[hi];
    if (diff == 0.0) continue;
    flows.push_back(
        {lo, hi, ctx.edge_weight_by_index(static_cast<std::uint32_t>(i)) * diff});
  }
  return flows;
}

DiffusionResult diffuse(QueryContext& ctx, const std::vector<NodeId>& seeds,
                        const DiffusionConfig& cfg) {
  cfg.validate();
  const Graph& g = ctx.graph();
  const std::size_t n = g.node_count();
  if (n == 0) {
    raise(ErrorCode::EmptyGraph, "cannot diffuse over an empty graph");
  }

  DiffusionResult res;
  res.sinks = resolve_sinks(g, cfg);
  res.sources = resolve_sources(g, seeds, res.sinks, cfg);
  res.x.assign(n, 0.0);
  res.m = res.sources;

  ConvergenceReport& rep = res.report;
  rep.eta_hat = std::numeric_limits<double>::infinity();

  ActiveSet active(n);
  std::deque<NodeId> fifo;
  std::vector<char> absorbed(n, 0);
  std::vector<char> touched(n, 0);

  auto activate = [&](NodeId v) {
    if (absorbed[v] || active.contains(v)) return;
    if (res.m[v] > res.sinks[v]) {
      active.insert(v);
      if (cfg.selection == DiffusionConfig::Selection::Fifo) {
        fifo.push_back(v);
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v) activate(static_cast<NodeId>(v));

  auto total_excess = [&]() {
    double sum = 0.0;
    for (NodeId v : active.items()) sum += res.m[v] - res.sinks[v];
    return sum;
  };
  auto mass_sum = [&]() {
    return std::accumulate(res.m.begin(), res.m.end(), 0.0);
  };

  auto record = [&](std::uint64_t iteration, NodeId pushed, double delta_x) {
    TraceEntry entry;
    entry.iteration = iteration;
    entry.objective = dual_objective(ctx, res.x, res.sinks, res.sources);
    entry.total_excess = total_excess();
    entry.mass_sum = mass_sum();
    entry.pushed_node = pushed;
    entry.delta_x = delta_x;
    rep.trace.push_back(entry);
  };

  if (cfg.trace != DiffusionConfig::Trace::None) {
    record(0, UINT32_MAX, 0.0);
  }

  auto rng = make_engine(cfg.rng_seed);
  std::uint64_t it = 0;
  Termination term = Termination::Converged;

  while (true) {
    if (active.empty()) {
      term = Termination::Converged;
      break;
    }
    if (it >= cfg.max_iterations) {
      term = Termination::IterationCap;
      break;
    }
    if (it % cfg.check_cadence == 0) {
      const double excess = total_excess();
      if (cfg.trace == DiffusionConfig::Trace::Cadence && it > 0) {
        record(it, UINT32_MAX, 0.0);
      }
      if (excess <= cfg.epsilon) {
        term = Termination::Converged;
        break;
      }
    }

    NodeId v;
    if (cfg.selection == DiffusionConfig::Selection::UniformRandom) {
      std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
      v = active.at(pick(rng));
    } else {
      v = fifo.front();
      fifo.pop_front();
      if (!active.contains(v)) continue;  // settled since it was queued
    }

    const double excess = res.m[v] - res.sinks[v];
    if (g.degree(v) == 0) {
      // No outgoing weight; the node keeps its excess and is flagged.
      absorbed[v] = 1;
      active.remove(v);
      rep.absorbed.push_back(v);
      continue;
    }

    const double wv = ctx.weighted_degree(v);
    const double delta_x = excess / wv;
    if (!touched[v]) {
      touched[v] = 1;
      rep.touch_order.push_back(v);
    }
    res.x[v] += delta_x;
    res.m[v] = res.sinks[v];
    active.remove(v);
    rep.gamma_hat = std::max(rep.gamma_hat, wv);
    for (const auto& entry : g.neighbors(v)) {
      const double w = ctx.edge_weight_by_index(entry.edge_index);
      rep.eta_hat = std::min(rep.eta_hat, w);
      res.m[entry.neighbor] += excess * w / wv;
      activate(entry.neighbor);
    }
    ++it;
    if (cfg.trace == DiffusionConfig::Trace::EveryPush) {
      record(it, v, delta_x);
    }
  }

  rep.iterations = it;
  rep.terminated_by = term;
  rep.final_total_excess = total_excess();
  if (!std::isfinite(rep.eta_hat)) rep.eta_hat = 0.0;

  for (std::size_t v = 0; v < n; ++v) {
    if (res.x[v] > cfg.support_threshold) {
      res.support.push_back(static_cast<NodeId>(v));
    }
  }
  return res;
}

}  // namespace qafd
