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

#include "embedding.hpp"

#include <cmath>

#include "error.hpp"
#include "random.hpp"

namespace qafd {

SimilarityKind SimilarityKind::rbf(double gamma) {
  if (!(gamma > 0.0)) {
    raise(ErrorCode::InvalidArgument,
          "RBF bandwidth must be positive, got " + std::to_string(gamma));
  }
  return {Kind::Rbf, gamma};
}

static void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    raise(ErrorCode::DimensionMismatch,
          "similarity over vectors of dimension " + std::to_string(a.size()) +
              " and " + std::to_string(b.size()));
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_dims(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double similarity(const SimilarityKind& kind, std::span<const double> a,
                  std::span<const double> b) {
  check_dims(a, b);
  switch (kind.kind) {
    case SimilarityKind::Kind::Cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      if (na == 0.0 || nb == 0.0) return 0.0;
      return dot / (std::sqrt(na) * std::sqrt(nb));
    }
    case SimilarityKind::Kind::Dot: {
      double dot = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
      return dot;
    }
    case SimilarityKind::Kind::Rbf: {
      if (!(kind.gamma > 0.0)) {
        raise(ErrorCode::InvalidArgument, "RBF bandwidth must be positive");
      }
      return std::exp(-kind.gamma * squared_distance(a, b));
    }
  }
  raise(ErrorCode::Internal, "unreachable similarity kind");
}

void EmbeddingTable::insert(const std::string& key,
                            std::vector<double> vector) {
  if (vectors_.empty() && dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    raise(ErrorCode::DimensionMismatch,
          "embedding '" + key + "' has dimension " +
              std::to_string(vector.size()) + ", table uses " +
              std::to_string(dim_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      raise(ErrorCode::InvalidArgument,
            "embedding '" + key + "' has a non-finite entry");
    }
  }
  vectors_[key] = std::move(vector);
}

const std::vector<double>* EmbeddingTable::find(const std::string& key) const {
  auto it = vectors_.find(key);
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<std::vector<double>> sample_embeddings(
    std::uint64_t seed, const std::vector<std::vector<double>>& means,
    const std::vector<double>& sigmas,
    const std::vector<std::size_t>& assignment) {
  const std::size_t d = sigmas.size();
  for (double s : sigmas) {
    if (s < 0.0) {
      raise(ErrorCode::InvalidArgument,
            "noise scale must be nonnegative, got " + std::to_string(s));
    }
  }
  for (const auto& mean : means) {
    if (mean.size() != d) {
      raise(ErrorCode::DimensionMismatch,
            "mean vector dimension " + std::to_string(mean.size()) +
                " does not match noise dimension " + std::to_string(d));
    }
  }
  auto rng = make_engine(seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<double>> out(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const std::size_t which = assignment[i];
    if (which >= means.size()) {
      raise(ErrorCode::InvalidArgument,
            "assignment " + std::to_string(which) + " has no mean");
    }
    std::vector<double> e(d);
    for (std::size_t l = 0; l < d; ++l) {
      // One standard normal per coordinate regardless of sigma keeps the
      // stream aligned across parameterizations.
      e[l] = means[which][l] + sigmas[l] * unit(rng);
    }
    out[i] = std::move(e);
  }
  return out;
}

EmbeddingTable synthetic_embeddings(
    std::uint64_t seed, const std::vector<std::vector<double>>& means,
    const std::vector<double>& sigmas,
    const std::vector<std::size_t>& assignment) {
  auto vectors = sample_embeddings(seed, means, sigmas, assignment);
  EmbeddingTable table(sigmas.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    table.insert(std::to_string(i), std::move(vectors[i]));
  }
  return table;
}

}  // namespace qafd
