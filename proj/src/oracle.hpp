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

#include <cstddef>
#include <vector>

#include "diffusion.hpp"
#include "weighting.hpp"

namespace qafd {

/// Dense form of the diffusion dual: minimize 1/2 x'Lx + x'linear over
/// x >= 0, with L the query-aware Laplacian. Small instances only; this is
/// the ground-truth side of solver comparisons.
struct DenseDual {
  std::size_t n = 0;
  std::vector<double> laplacian;  // row-major n x n
  std::vector<double> linear;     // T - delta

  double at(std::size_t row, std::size_t col) const {
    return laplacian[row * n + col];
  }
};

/// Assembles L and the linear term densely. Fails with TooLarge above
/// `cap` nodes.
DenseDual assemble_dense(QueryContext& ctx, const std::vector<double>& sinks,
                         const std::vector<double>& sources,
                         std::size_t cap = 200);

struct QpSolution {
  std::vector<double> x;
  double objective = 0.0;
  double kkt_residual = 0.0;
  std::size_t sweeps = 0;
};

/// Projected cyclic coordinate descent with exact coordinate minimization,
/// swept until the complementarity residual max_v |min(x_v, grad_v)| falls
/// to `tol`. Throws NoProgress if the residual stalls above tol for 10^4
/// consecutive sweeps.
QpSolution solve_nonneg_qp(const DenseDual& dd, double tol);

double dense_objective(const DenseDual& dd, const std::vector<double>& x);
double kkt_residual(const DenseDual& dd, const std::vector<double>& x);

}  // namespace qafd
