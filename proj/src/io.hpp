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

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "graph.hpp"

namespace qafd {

// File formats are plain tab-separated text so fixtures stay diffable.
//   nodes:      label<TAB>v1,...,vd     (or bare label with a side table)
//   edges:      label_u<TAB>label_v[<TAB>base_weight]
//   embeddings: key<TAB>v1,...,vd

/// Shortest round-trip decimal rendering, locale independent.
std::string fmt_double(double value);

std::vector<double> parse_vector(const std::string& csv,
                                 const std::string& where);

EmbeddingTable load_embeddings(const std::string& path);

/// Loads and validates a graph. Node embeddings come inline or, for bare
/// labels, from `table`. Parse failures report file and line.
Graph load_graph(const std::string& nodes_path, const std::string& edges_path,
                 const EmbeddingTable* table = nullptr);

void save_graph(const Graph& g, const std::string& nodes_path,
                const std::string& edges_path);

/// `key = value` configuration text; '#' starts a comment.
std::map<std::string, std::string> parse_kv(std::istream& in);
std::map<std::string, std::string> load_kv(const std::string& path);

}  // namespace qafd
