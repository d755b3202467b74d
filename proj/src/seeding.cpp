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

#include "seeding.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace qafd {

NodeScores score_nodes(const Graph& g, const KeywordSet& keywords,
                       const SimilarityKind& sim) {
  if (keywords.embeddings.empty()) {
    raise(ErrorCode::InvalidArgument, "keyword set is empty");
  }
  if (keywords.keywords.size() != keywords.embeddings.size()) {
    raise(ErrorCode::InvalidArgument,
          "keyword texts and embeddings differ in length");
  }
  for (const auto& e : keywords.embeddings) {
    if (e.size() != g.dim()) {
      raise(ErrorCode::DimensionMismatch,
            "keyword embedding dimension " + std::to_string(e.size()) +
                " does not match graph dimension " + std::to_string(g.dim()));
    }
  }

  NodeScores out;
  out.scores.assign(g.node_count(), -std::numeric_limits<double>::infinity());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : keywords.embeddings) {
      best = std::max(best,
                      similarity(sim, e, g.node(static_cast<NodeId>(v)).embedding));
      ++out.evaluations;
    }
    out.scores[v] = best;
  }
  return out;
}

SeedSelection select_seeds(std::vector<double> scores,
                           std::size_t num_seeds) {
  if (num_seeds == 0 || num_seeds > scores.size()) {
    raise(ErrorCode::InvalidArgument,
          "seed count " + std::to_string(num_seeds) +
              " out of range for " + std::to_string(scores.size()) +
              " nodes");
  }
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  auto better = [&scores](NodeId lhs, NodeId rhs) {
    if (scores[lhs] != scores[rhs]) return scores[lhs] > scores[rhs];
    return lhs < rhs;
  };
  std::partial_sort(order.begin(), order.begin() + num_seeds, order.end(),
                    better);
  order.resize(num_seeds);
  return SeedSelection{std::move(order), std::move(scores)};
}

}  // namespace qafd
