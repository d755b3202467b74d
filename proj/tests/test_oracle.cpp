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

#include "oracle.hpp"

#include <random>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"

using namespace qafd;
using qafd::testing::make_weighted_graph;
using qafd::testing::random_graph;
using qafd::testing::structural_query;
using qafd::testing::structural_scheme;

TEST_CASE("single edge assembles the 2x2 laplacian") {
  const Graph g = make_weighted_graph(2, {{0, 1, 1.7}});
  QueryContext ctx(g, structural_scheme(), structural_query());
  const std::vector<double> zeros(2, 0.0);
  const DenseDual dd = assemble_dense(ctx, zeros, zeros);
  CHECK(dd.at(0, 0) == doctest::Approx(1.7));
  CHECK(dd.at(1, 1) == doctest::Approx(1.7));
  CHECK(dd.at(0, 1) == doctest::Approx(-1.7));
  CHECK(dd.at(1, 0) == doctest::Approx(-1.7));
}

TEST_CASE("unit triangle assembles the standard laplacian") {
  const Graph g =
      make_weighted_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  QueryContext ctx(g, structural_scheme(), structural_query());
  const std::vector<double> zeros(3, 0.0);
  const DenseDual dd = assemble_dense(ctx, zeros, zeros);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(dd.at(i, j) == doctest::Approx(i == j ? 2.0 : -1.0));
    }
  }
}

TEST_CASE("laplacian rows sum to zero and off-diagonals are nonpositive") {
  std::mt19937_64 rng(3);
  const Graph g = random_graph(rng, 12, 10);
  QueryContext ctx(g, WeightScheme::product_rbf(0.2, 0.2, 0.2),
                   std::vector<double>{0.1, 0.2, -0.1});
  const std::vector<double> zeros(g.node_count(), 0.0);
  const DenseDual dd = assemble_dense(ctx, zeros, zeros);
  for (std::size_t i = 0; i < dd.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < dd.n; ++j) {
      row += dd.at(i, j);
      if (i != j) CHECK(dd.at(i, j) <= 0.0);
      CHECK(dd.at(i, j) == doctest::Approx(dd.at(j, i)));
    }
    CHECK(row == doctest::Approx(0.0));
  }
}

TEST_CASE("quadratic form equals the weighted edge sum") {
  std::mt19937_64 rng(5);
  const Graph g = random_graph(rng, 14, 12);
  QueryContext ctx(g, WeightScheme::product_rbf(0.3, 0.3, 0.3),
                   std::vector<double>{0.0, 0.0, 0.0});
  const std::vector<double> zeros(g.node_count(), 0.0);
  const DenseDual dd = assemble_dense(ctx, zeros, zeros);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int probe = 0; probe < 10; ++probe) {
    std::vector<double> x(g.node_count());
    for (auto& value : x) value = dist(rng);
    double quad = 0.0;
    for (std::size_t i = 0; i < dd.n; ++i) {
      for (std::size_t j = 0; j < dd.n; ++j) {
        quad += x[i] * dd.at(i, j) * x[j];
      }
    }
    double edge_sum = 0.0;
    QueryContext wctx(g, WeightScheme::product_rbf(0.3, 0.3, 0.3),
                      std::vector<double>{0.0, 0.0, 0.0});
    for (const Edge& e : g.edges()) {
      const double diff = x[e.u] - x[e.v];
      edge_sum += edge_weight(wctx, e.u, e.v) * diff * diff;
    }
    CHECK(quad == doctest::Approx(edge_sum));
  }
}

TEST_CASE("dense assembly enforces the size cap") {
  std::mt19937_64 rng(7);
  const Graph g = random_graph(rng, 10, 5);
  QueryContext ctx(g, structural_scheme(), std::vector<double>{0.0, 0.0, 0.0});
  const std::vector<double> zeros(10, 0.0);
  CHECK_THROWS_AS(assemble_dense(ctx, zeros, zeros, 5), Error);
}

TEST_CASE("nonnegative linear term pins the solution at the origin") {
  const Graph g = make_weighted_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  QueryContext ctx(g, structural_scheme(), structural_query());
  const std::vector<double> sinks{1.0, 1.0, 1.0};
  const std::vector<double> sources{0.5, 0.0, 1.0};  // T >= delta everywhere
  const DenseDual dd = assemble_dense(ctx, sinks, sources);
  const QpSolution sol = solve_nonneg_qp(dd, 1e-10);
  for (double xv : sol.x) CHECK(xv == 0.0);
  CHECK(sol.objective == 0.0);
}

TEST_CASE("two-node instance matches the closed-form KKT solution") {
  // Feasible variant: delta = [1.5, 0], T = [1, 1], w = 1. Complementarity
  // gives x = [0.5, 0]: the gradient at node 0 vanishes and node 1 stays
  // at capacity margin 0.5 >= 0.
  const Graph g = make_weighted_graph(2, {{0, 1, 1.0}});
  QueryContext ctx(g, structural_scheme(), structural_query());
  const std::vector<double> sinks{1.0, 1.0};
  const std::vector<double> sources{1.5, 0.0};
  const DenseDual dd = assemble_dense(ctx, sinks, sources);
  const QpSolution sol = solve_nonneg_qp(dd, 1e-12);
  CHECK(sol.x[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sol.x[1] == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(0.5 * 0.25 - 0.5 * 0.5));
}

TEST_CASE("infeasible mass is reported as no progress") {
  // Total source mass exceeds total capacity, so the dual is unbounded
  // below and the sweep never reaches the tolerance.
  const Graph g = make_weighted_graph(2, {{0, 1, 1.0}});
  QueryContext ctx(g, structural_scheme(), structural_query());
  const DenseDual dd =
      assemble_dense(ctx, {1.0, 1.0}, {3.0, 0.0});
  CHECK_THROWS_AS(solve_nonneg_qp(dd, 1e-10), Error);
}

TEST_CASE("oracle output satisfies the KKT certificate") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 10; ++round) {
    const Graph g = random_graph(rng, 12, 10);
    QueryContext ctx(g, WeightScheme::product_rbf(0.1, 0.1, 0.1),
                     std::vector<double>{0.0, 0.0, 0.0});
    std::vector<double> sinks(g.node_count());
    std::uniform_real_distribution<double> sink_dist(1.0, 2.0);
    for (auto& t : sinks) t = sink_dist(rng);
    std::vector<double> sources(g.node_count(), 0.0);
    sources[0] = 2.5 * sinks[0];
    const DenseDual dd = assemble_dense(ctx, sinks, sources);
    constexpr double tol = 1e-10;
    const QpSolution sol = solve_nonneg_qp(dd, tol);
    CHECK(sol.kkt_residual <= tol);
    // Explicit certificate: x >= 0, grad >= -tol, complementarity <= tol.
    for (std::size_t v = 0; v < dd.n; ++v) {
      double grad = dd.linear[v];
      for (std::size_t j = 0; j < dd.n; ++j) grad += dd.at(v, j) * sol.x[j];
      CHECK(sol.x[v] >= 0.0);
      CHECK(grad >= -tol);
      CHECK(sol.x[v] * grad <= tol * std::max(1.0, sol.x[v]));
    }
  }
}

TEST_CASE("oracle output is locally optimal under feasible perturbations") {
  std::mt19937_64 rng(13);
  const Graph g = random_graph(rng, 10, 8);
  QueryContext ctx(g, WeightScheme::product_rbf(0.1, 0.1, 0.1),
                   std::vector<double>{0.0, 0.0, 0.0});
  std::vector<double> sinks(g.node_count(), 1.0);
  std::vector<double> sources(g.node_count(), 0.0);
  sources[2] = 4.0;
  const DenseDual dd = assemble_dense(ctx, sinks, sources);
  const QpSolution sol = solve_nonneg_qp(dd, 1e-12);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  for (int probe = 0; probe < 100; ++probe) {
    std::vector<double> x = sol.x;
    for (std::size_t v = 0; v < x.size(); ++v) {
      // Perturbations keep x feasible (nonnegative).
      x[v] = std::max(0.0, x[v] + jitter(rng));
    }
    CHECK(dense_objective(dd, x) >= sol.objective - 1e-9);
  }
}
