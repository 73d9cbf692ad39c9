/*
 * Copyright 2026 The MannLab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Brute-force references for the DNC memory management, shared by the unit
// tests and the acceptance suite. Deliberately written as direct loops over
// the definitions.

#pragma once

#include <utility>
#include <vector>

#include "mann/tensor.hpp"

namespace mann::testing {

// Explicit selection sort by (usage, index), then the defining product.
inline std::vector<double> allocation_oracle(const std::vector<double>& u) {
  const int n = static_cast<int>(u.size());
  std::vector<int> order;
  std::vector<bool> used(n, false);
  for (int pick = 0; pick < n; ++pick) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (best < 0 || u[i] < u[best]) best = i;  // strict: keeps lower index on ties
    }
    used[best] = true;
    order.push_back(best);
  }
  std::vector<double> a(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int i = 0; i < j; ++i) prod *= u[order[i]];
    a[order[j]] = (1.0 - u[order[j]]) * prod;
  }
  return a;
}

// Two nested loops over the defining equation, diagonal forced to zero.
inline Tensor link_update_oracle(const Tensor& l_prev, const std::vector<double>& w,
                                 const std::vector<double>& p_prev) {
  const int n = static_cast<int>(w.size());
  Tensor out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.at(i, j) =
          i == j ? 0.0 : (1.0 - w[i] - w[j]) * l_prev.at(i, j) + w[i] * p_prev[j];
  return out;
}

}  // namespace mann::testing
