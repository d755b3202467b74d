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
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qafd {

/// Similarity function over embedding vectors.
struct SimilarityKind {
  enum class Kind { Cosine, Dot, Rbf };

  Kind kind = Kind::Cosine;
  double gamma = 1.0;  // RBF bandwidth, > 0

  static SimilarityKind cosine() { return {Kind::Cosine, 1.0}; }
  static SimilarityKind dot() { return {Kind::Dot, 1.0}; }
  static SimilarityKind rbf(double gamma);
};

/// Cosine: a.b / (|a||b|), 0 when either norm is 0. Dot: a.b.
/// RBF: exp(-gamma |a-b|^2).
double similarity(const SimilarityKind& kind, std::span<const double> a,
                  std::span<const double> b);

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Keyed embedding store; every vector shares one dimension and all
/// entries are finite.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  void insert(const std::string& key, std::vector<double> vector);
  const std::vector<double>* find(const std::string& key) const;
  const std::map<std::string, std::vector<double>>& entries() const {
    return vectors_;
  }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

/// Draws e_i = means[assignment[i]] + z_i with independent Gaussian
/// coordinates z_il ~ N(0, sigmas[l]^2). Deterministic per seed; table keys
/// are the decimal indices 0..assignment.size()-1.
EmbeddingTable synthetic_embeddings(
    std::uint64_t seed, const std::vector<std::vector<double>>& means,
    const std::vector<double>& sigmas,
    const std::vector<std::size_t>& assignment);

/// Raw-vector variant used by the synthetic graph generator.
std::vector<std::vector<double>> sample_embeddings(
    std::uint64_t seed, const std::vector<std::vector<double>>& means,
    const std::vector<double>& sigmas,
    const std::vector<std::size_t>& assignment);

}  // namespace qafd
