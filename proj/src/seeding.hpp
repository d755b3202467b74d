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
#include <string>
#include <vector>

#include "embedding.hpp"
#include "graph.hpp"

namespace qafd {

struct KeywordSet {
  std::vector<std::string> keywords;
  std::vector<std::vector<double>> embeddings;
};

struct NodeScores {
  /// score(v) = max over keywords of sim(keyword, node).
  std::vector<double> scores;
  /// Number of similarity evaluations performed (|V| * |keywords|).
  std::uint64_t evaluations = 0;
};

struct SeedSelection {
  /// Sorted by (score desc, id asc); every seed score >= every non-seed
  /// score.
  std::vector<NodeId> seeds;
  std::vector<double> scores;  // all nodes, indexed by id
};

NodeScores score_nodes(const Graph& g, const KeywordSet& keywords,
                       const SimilarityKind& sim);

SeedSelection select_seeds(std::vector<double> scores, std::size_t num_seeds);

}  // namespace qafd
