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
#include <random>

#include "doctest.h"
#include "error.hpp"

using namespace qafd;

TEST_CASE("similarity basics") {
  const std::vector<double> v{0.3, -0.4, 1.2};
  CHECK(similarity(SimilarityKind::cosine(), v, v) == doctest::Approx(1.0));
  CHECK(similarity(SimilarityKind::rbf(3.7), v, v) == doctest::Approx(1.0));
  const std::vector<double> ex{1.0, 0.0}, ey{0.0, 1.0};
  CHECK(similarity(SimilarityKind::cosine(), ex, ey) ==
        doctest::Approx(0.0));
  const std::vector<double> da{2.0, 3.0}, db{4.0, -1.0};
  CHECK(similarity(SimilarityKind::dot(), da, db) == doctest::Approx(5.0));
}

TEST_CASE("cosine of a zero vector is zero, not an error") {
  const std::vector<double> zero{0.0, 0.0}, v{1.0, 2.0};
  CHECK(similarity(SimilarityKind::cosine(), zero, v) == 0.0);
  CHECK(similarity(SimilarityKind::cosine(), v, zero) == 0.0);
}

TEST_CASE("similarity rejects mismatched dimensions") {
  CHECK_THROWS_AS(
      similarity(SimilarityKind::cosine(), std::vector<double>{1.0},
                 std::vector<double>{1.0, 2.0}),
      Error);
  CHECK_THROWS_AS(SimilarityKind::rbf(-1.0), Error);
}

TEST_CASE("similarity symmetry and ranges") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int round = 0; round < 50; ++round) {
    std::vector<double> a(4), b(4);
    for (auto& x : a) x = coord(rng);
    for (auto& x : b) x = coord(rng);
    for (const auto& kind :
         {SimilarityKind::cosine(), SimilarityKind::dot(),
          SimilarityKind::rbf(0.7)}) {
      CHECK(similarity(kind, a, b) == doctest::Approx(similarity(kind, b, a)));
    }
    const double cos = similarity(SimilarityKind::cosine(), a, b);
    CHECK(cos >= -1.0 - 1e-12);
    CHECK(cos <= 1.0 + 1e-12);
    const double rbf = similarity(SimilarityKind::rbf(0.7), a, b);
    CHECK(rbf > 0.0);
    CHECK(rbf <= 1.0);
  }
}

TEST_CASE("synthetic embeddings are exact when noiseless") {
  const std::vector<std::vector<double>> means{{1.0, -2.0, 0.5}};
  const std::vector<double> sigmas{0.0, 0.0, 0.0};
  const EmbeddingTable table =
      synthetic_embeddings(99, means, sigmas, {0, 0, 0});
  CHECK(table.size() == 3);
  for (const auto& [key, vec] : table.entries()) {
    CHECK(vec == means[0]);
  }
}

TEST_CASE("synthetic embeddings are deterministic per seed") {
  const std::vector<std::vector<double>> means{{0.0, 0.0}, {3.0, -1.0}};
  const std::vector<double> sigmas{0.2, 0.2};
  const std::vector<std::size_t> assignment{0, 1, 0, 1, 1};
  const EmbeddingTable a = synthetic_embeddings(5, means, sigmas, assignment);
  const EmbeddingTable b = synthetic_embeddings(5, means, sigmas, assignment);
  const EmbeddingTable c = synthetic_embeddings(6, means, sigmas, assignment);
  REQUIRE(a.size() == b.size());
  for (const auto& [key, vec] : a.entries()) {
    CHECK(*b.find(key) == vec);
  }
  bool any_difference = false;
  for (const auto& [key, vec] : a.entries()) {
    any_difference |= *c.find(key) != vec;
  }
  CHECK(any_difference);
}

TEST_CASE("synthetic noise has the requested mean") {
  // Monte-Carlo check against the generator itself: 1e4 draws of a
  // d=4 vector with sigma 0.1 leave the sample mean within 0.01 of mu
  // per coordinate (ten standard errors).
  const std::vector<double> mu{0.4, -0.7, 0.0, 2.5};
  const std::vector<double> sigmas(4, 0.1);
  const std::size_t draws = 10000;
  const auto vectors = sample_embeddings(
      123, {mu}, sigmas, std::vector<std::size_t>(draws, 0));
  for (std::size_t l = 0; l < 4; ++l) {
    double sum = 0.0;
    for (const auto& v : vectors) sum += v[l];
    CHECK(std::abs(sum / draws - mu[l]) < 0.01);
  }
}

TEST_CASE("negative noise scale is rejected") {
  CHECK_THROWS_AS(
      sample_embeddings(1, {{0.0}}, {-0.1}, {0}),
      Error);
}

TEST_CASE("embedding table validates entries") {
  EmbeddingTable table;
  table.insert("a", {1.0, 2.0});
  CHECK_THROWS_AS(table.insert("b", {1.0}), Error);
  CHECK_THROWS_AS(table.insert("c", {1.0, std::nan("")}), Error);
  CHECK(table.find("a") != nullptr);
  CHECK(table.find("missing") == nullptr);
}
