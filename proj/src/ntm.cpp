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

#include "mann/ntm.hpp"

namespace mann {

Tensor ntm_content_address(Tape& t, const Tensor& m, const Tensor& k, const Tensor& beta) {
  Tensor sims = ops::cosine_rows(t, m, k);
  return ops::softmax(t, ops::scalar_mul(t, beta, sims));
}

Tensor ntm_interpolate(Tape& t, const Tensor& c, const Tensor& w_prev, const Tensor& g) {
  Tensor one_minus_g = ops::sub(t, Tensor::ones(1, 1), g);
  return ops::add(t, ops::scalar_mul(t, g, c), ops::scalar_mul(t, one_minus_g, w_prev));
}

Tensor ntm_circular_shift(Tape& t, const Tensor& w, const Tensor& s) {
  return ops::circular_conv(t, w, s);
}

Tensor ntm_sharpen(Tape& t, const Tensor& w, const Tensor& gamma) {
  Tensor powered = ops::power(t, w, gamma);
  Tensor inv_total = ops::power(t, ops::sum(t, powered), Tensor::full(1, 1, -1.0));
  return ops::scalar_mul(t, inv_total, powered);
}

Tensor ntm_address(Tape& t, const Tensor& m, const NtmHeadIface& ifc, const Tensor& w_prev) {
  Tensor c = ntm_content_address(t, m, ifc.k, ifc.beta);
  Tensor wg = ntm_interpolate(t, c, w_prev, ifc.g);
  Tensor shifted = ntm_circular_shift(t, wg, ifc.s);
  return ntm_sharpen(t, shifted, ifc.gamma);
}

}  // namespace mann
