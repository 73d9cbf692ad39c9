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

#include <cstdint>
#include <string>
#include <vector>

#include "mann/parameters.hpp"
#include "mann/tensor.hpp"

namespace mann {

// Primitive kinds recorded on the tape. "log" is the one addition beyond
// the elementary set; the softmax cross-entropy loss needs it.
enum class Op {
  leaf,
  matmul,
  add,
  sub,
  hadamard,
  scalar_mul,
  concat_rows,
  slice,
  tanh,
  logistic_sigmoid,
  softplus,
  softmax_over_vector,
  exp,
  log,
  power,
  cosine_similarity_rowwise,
  sum,
  mean,
  circular_convolution_1d,
  outer_product,
  cumulative_product_exclusive,
};

const char* op_name(Op op);
Op op_from_string(const std::string& name);  // unknown kind -> rejected

// Reverse-mode tape over dense matrices. Forward values are cached per node
// in recording order; backward() visits nodes in exact reverse order.
// Inputs may be recorded tensors of this tape or plain constants (node -1);
// gradients never flow into constants.
class Tape {
 public:
  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Records a leaf carrying a parameter value; backward() adds dloss/dleaf
  // into the parameter's gradient accumulator.
  Tensor leaf(Parameter& p);
  // Records a leaf without a sink; its gradient stays readable via grad().
  Tensor input(const Tensor& value);

  Tensor apply(Op kind, const std::vector<Tensor>& inputs, int a0 = 0, int a1 = 0);

  // loss must be a recorded 1x1 node of this tape. Repeated calls without
  // zeroing the parameter accumulators add up.
  void backward(const Tensor& loss);

  // Gradient buffer of a recorded tensor after the latest backward();
  // all-zeros if the node was never touched.
  Tensor grad(const Tensor& of) const;

  void clear();
  std::size_t size() const { return nodes_.size(); }
  std::uint64_t id() const { return id_; }

 private:
  struct InputRef {
    int node = -1;
    Tensor constant;  // used when node < 0
  };
  struct NodeRec {
    Op kind;
    int a0 = 0, a1 = 0;
    std::vector<InputRef> inputs;
    Tensor value;
    Tensor grad;  // empty until touched by backward
    Parameter* sink = nullptr;
  };

  const Tensor& in_value(const NodeRec& n, std::size_t i) const;
  Tensor& grad_buffer(int node);
  Tensor forward(Op kind, const NodeRec& n) const;
  void backward_node(int id);
  int check_inputs(Op kind, const std::vector<Tensor>& inputs) const;

  std::uint64_t id_ = 0;
  std::vector<NodeRec> nodes_;
};

// Thin wrappers so model code reads like the math.
namespace ops {

Tensor matmul(Tape& t, const Tensor& a, const Tensor& b, bool ta = false, bool tb = false);
Tensor add(Tape& t, const Tensor& a, const Tensor& b);
Tensor sub(Tape& t, const Tensor& a, const Tensor& b);
Tensor hadamard(Tape& t, const Tensor& a, const Tensor& b);
Tensor scalar_mul(Tape& t, const Tensor& s, const Tensor& a);
Tensor concat_rows(Tape& t, const std::vector<Tensor>& parts);
Tensor slice_rows(Tape& t, const Tensor& a, int start, int count);
Tensor tanh(Tape& t, const Tensor& a);
Tensor sigmoid(Tape& t, const Tensor& a);
Tensor softplus(Tape& t, const Tensor& a);
Tensor softmax(Tape& t, const Tensor& a);
Tensor exp(Tape& t, const Tensor& a);
Tensor log(Tape& t, const Tensor& a);
Tensor power(Tape& t, const Tensor& base, const Tensor& expo);
Tensor cosine_rows(Tape& t, const Tensor& m, const Tensor& k);
Tensor sum(Tape& t, const Tensor& a);
Tensor mean(Tape& t, const Tensor& a);
Tensor circular_conv(Tape& t, const Tensor& w, const Tensor& s);
Tensor outer(Tape& t, const Tensor& a, const Tensor& b);
Tensor cumprod_exclusive(Tape& t, const Tensor& a);

// Gathers rows of a column vector in the given order; composed from slice
// and concat-rows nodes (the permutation itself carries no gradient).
Tensor permute_rows(Tape& t, const Tensor& a, const std::vector<int>& order);
// w*x + b.
Tensor affine(Tape& t, const Tensor& w, const Tensor& x, const Tensor& b);

}  // namespace ops

// Epsilon added to the product of norms in cosine similarity.
inline constexpr double kCosineEps = 1e-6;

}  // namespace mann
