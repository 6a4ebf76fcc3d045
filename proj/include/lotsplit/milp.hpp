// Copyright 2026 the lotsplit project
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

#ifndef LOTSPLIT_MILP_HPP_
#define LOTSPLIT_MILP_HPP_

#include <vector>

#include "lotsplit/lotsizing.hpp"
#include "lotsplit/lp.hpp"

namespace lotsplit {

// Mixed-integer model over 2n variables: x_1..x_n then y_1..y_n. Dropping
// integer_mask yields the node relaxation solved throughout the tree.
struct MilpModel {
  LinearProgram lp;
  std::vector<bool> integer_mask;
};

// Rows, in order: prefix demand covers for i = 1..n-1, the total production
// balance, then one setup link x_i <= d_i..n * y_i per period. Bounds carry
// x >= 0 and y in [0, 1]; only the y block is integer-constrained.
inline MilpModel build_milp(const Instance& inst) {
  const int n = inst.n;
  MilpModel model;
  model.lp.objective.reserve(2 * n);
  for (int i = 0; i < n; ++i) model.lp.objective.push_back(inst.p[i]);
  for (int i = 0; i < n; ++i) model.lp.objective.push_back(inst.f[i]);

  for (int i = 1; i <= n - 1; ++i) {
    LpRow row;
    row.coeffs.assign(2 * n, Rat(0));
    for (int k = 1; k <= i; ++k) row.coeffs[k - 1] = 1;
    row.sense = Sense::kGe;
    row.rhs = cumulative_demand(inst, 1, i);
    model.lp.rows.push_back(std::move(row));
  }
  {
    LpRow row;
    row.coeffs.assign(2 * n, Rat(0));
    for (int k = 1; k <= n; ++k) row.coeffs[k - 1] = 1;
    row.sense = Sense::kEq;
    row.rhs = cumulative_demand(inst, 1, n);
    model.lp.rows.push_back(std::move(row));
  }
  for (int i = 1; i <= n; ++i) {
    LpRow row;
    row.coeffs.assign(2 * n, Rat(0));
    row.coeffs[i - 1] = 1;
    row.coeffs[n + i - 1] = -cumulative_demand(inst, i, n);
    row.sense = Sense::kLe;
    row.rhs = 0;
    model.lp.rows.push_back(std::move(row));
  }

  model.lp.bounds.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    model.lp.bounds[i] = VarBounds{Rat(0), std::nullopt};
    model.lp.bounds[n + i] = VarBounds{Rat(0), Rat(1)};
  }
  model.integer_mask.assign(2 * n, false);
  for (int i = 0; i < n; ++i) model.integer_mask[n + i] = true;
  return model;
}

}  // namespace lotsplit

#endif  // LOTSPLIT_MILP_HPP_
