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

#include "mann/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "mann/kernels.hpp"

namespace mann {

double clip_global_norm(ParameterStore& params, double threshold) {
  if (threshold <= 0.0) throw std::invalid_argument("clip_global_norm: threshold must be > 0");
  double sq = 0.0;
  for (const auto& p : params.all()) sq += kernels::sumsq(p.grad.size(), p.grad.data());
  const double norm = std::sqrt(sq);
  if (norm > threshold) {
    const double scale = threshold / norm;
    for (auto& p : params.all())
      for (int i = 0; i < p.grad.size(); ++i) p.grad[i] *= scale;
  }
  return norm;
}

void rmsprop_step(ParameterStore& params, const RmspropConfig& cfg) {
  const double keep = cfg.decay;
  const double mix = 1.0 - cfg.decay;
  for (auto& p : params.all()) {
    for (int i = 0; i < p.size(); ++i) {
      const double g = p.grad[i];
      p.rms_n[i] = keep * p.rms_n[i] + mix * g * g;
      p.rms_m[i] = keep * p.rms_m[i] + mix * g;
      const double denom = std::sqrt(p.rms_n[i] - p.rms_m[i] * p.rms_m[i] + cfg.damping);
      p.delta[i] = cfg.momentum * p.delta[i] - cfg.lr * g / denom;
      p.value[i] += p.delta[i];
      p.grad[i] = 0.0;
    }
  }
}

}  // namespace mann
