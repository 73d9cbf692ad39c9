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

#pragma once

#include "mann/parameters.hpp"

namespace mann {

// Centered RMSProp with momentum (Graves 2013):
//   n <- decay*n + (1-decay)*g^2
//   m <- decay*m + (1-decay)*g
//   d <- momentum*d - lr*g / sqrt(n - m^2 + damping)
//   theta <- theta + d
struct RmspropConfig {
  double lr = 1e-4;
  double momentum = 0.9;
  double decay = 0.95;
  double damping = 1e-4;
};

// Scales every gradient entry by threshold/norm when the global L2 norm
// across all parameters exceeds the threshold. Returns the pre-clip norm.
double clip_global_norm(ParameterStore& params, double threshold);

// Applies one update to every parameter and resets the gradient
// accumulators to zero.
void rmsprop_step(ParameterStore& params, const RmspropConfig& cfg);

}  // namespace mann
