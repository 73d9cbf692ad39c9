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

#include "mann/memory.hpp"
#include "mann/tape.hpp"

namespace mann {

// NTM head weight generation: content addressing, interpolation against the
// previous weight, circular shift, sharpening. Applied identically to the
// write head (against M_{t-1}) and each read head (against M_t). Every
// stage maps simplex to simplex.

// c[i] = softmax_i(beta * cos(k, M[i])), cosine denominator stabilized.
Tensor ntm_content_address(Tape& t, const Tensor& m, const Tensor& k, const Tensor& beta);
// g*c + (1-g)*w_prev
Tensor ntm_interpolate(Tape& t, const Tensor& c, const Tensor& w_prev, const Tensor& g);
// circular convolution with the shift distribution (offsets -3..+3)
Tensor ntm_circular_shift(Tape& t, const Tensor& w, const Tensor& s);
// w[i]^gamma / sum_j w[j]^gamma
Tensor ntm_sharpen(Tape& t, const Tensor& w, const Tensor& gamma);

Tensor ntm_address(Tape& t, const Tensor& m, const NtmHeadIface& ifc, const Tensor& w_prev);

}  // namespace mann
