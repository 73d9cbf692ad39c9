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

#include "mann/tape.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "mann/kernels.hpp"

namespace mann {

namespace {

std::atomic<std::uint64_t> g_tape_counter{1};

[[noreturn]] void shape_error(Op op, const std::string& detail) {
  throw std::invalid_argument(std::string(op_name(op)) + ": " + detail);
}

void require(bool ok, Op op, const std::string& detail) {
  if (!ok) shape_error(op, detail);
}

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::leaf: return "leaf";
    case Op::matmul: return "matmul";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::hadamard: return "hadamard";
    case Op::scalar_mul: return "scalar-mul";
    case Op::concat_rows: return "concat-rows";
    case Op::slice: return "slice";
    case Op::tanh: return "tanh";
    case Op::logistic_sigmoid: return "logistic-sigmoid";
    case Op::softplus: return "softplus";
    case Op::softmax_over_vector: return "softmax-over-vector";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::power: return "power";
    case Op::cosine_similarity_rowwise: return "cosine-similarity-rowwise";
    case Op::sum: return "sum";
    case Op::mean: return "mean";
    case Op::circular_convolution_1d: return "circular-convolution-1d";
    case Op::outer_product: return "outer-product";
    case Op::cumulative_product_exclusive: return "cumulative-product-exclusive";
  }
  return "?";
}

Op op_from_string(const std::string& name) {
  static const std::pair<const char*, Op> table[] = {
      {"matmul", Op::matmul},
      {"add", Op::add},
      {"sub", Op::sub},
      {"hadamard", Op::hadamard},
      {"scalar-mul", Op::scalar_mul},
      {"concat-rows", Op::concat_rows},
      {"slice", Op::slice},
      {"tanh", Op::tanh},
      {"logistic-sigmoid", Op::logistic_sigmoid},
      {"softplus", Op::softplus},
      {"softmax-over-vector", Op::softmax_over_vector},
      {"exp", Op::exp},
      {"log", Op::log},
      {"power", Op::power},
      {"cosine-similarity-rowwise", Op::cosine_similarity_rowwise},
      {"sum", Op::sum},
      {"mean", Op::mean},
      {"circular-convolution-1d", Op::circular_convolution_1d},
      {"outer-product", Op::outer_product},
      {"cumulative-product-exclusive", Op::cumulative_product_exclusive},
  };
  for (const auto& [key, op] : table)
    if (name == key) return op;
  throw std::invalid_argument("unknown primitive kind: " + name);
}

Tape::Tape() : id_(g_tape_counter.fetch_add(1)) {}

Tensor Tape::leaf(Parameter& p) {
  Tensor out = p.value;
  out.node = static_cast<int>(nodes_.size());
  out.tape_id = id_;
  NodeRec rec;
  rec.kind = Op::leaf;
  rec.value = p.value;
  rec.sink = &p;
  nodes_.push_back(std::move(rec));
  return out;
}

Tensor Tape::input(const Tensor& value) {
  Tensor out = value;
  out.node = static_cast<int>(nodes_.size());
  out.tape_id = id_;
  NodeRec rec;
  rec.kind = Op::leaf;
  rec.value = value;
  rec.value.node = -1;
  nodes_.push_back(std::move(rec));
  return out;
}

const Tensor& Tape::in_value(const NodeRec& n, std::size_t i) const {
  const InputRef& ref = n.inputs[i];
  return ref.node >= 0 ? nodes_[ref.node].value : ref.constant;
}

Tensor& Tape::grad_buffer(int node) {
  NodeRec& rec = nodes_[node];
  if (rec.grad.size() == 0) rec.grad = Tensor::zeros(rec.value.rows(), rec.value.cols());
  return rec.grad;
}

int Tape::check_inputs(Op kind, const std::vector<Tensor>& inputs) const {
  for (const Tensor& t : inputs) {
    if (t.node >= 0) {
      if (t.tape_id != id_ || t.node >= static_cast<int>(nodes_.size()))
        shape_error(kind, "input tensor belongs to a different (or cleared) tape");
    }
    if (t.size() == 0) shape_error(kind, "empty input tensor");
  }
  return 0;
}

Tensor Tape::apply(Op kind, const std::vector<Tensor>& inputs, int a0, int a1) {
  if (kind == Op::leaf)
    throw std::invalid_argument("leaf nodes are created via Tape::leaf/input");
  check_inputs(kind, inputs);

  NodeRec rec;
  rec.kind = kind;
  rec.a0 = a0;
  rec.a1 = a1;
  rec.inputs.reserve(inputs.size());
  for (const Tensor& t : inputs) {
    InputRef ref;
    if (t.node >= 0) {
      ref.node = t.node;
    } else {
      ref.constant = t;
    }
    rec.inputs.push_back(std::move(ref));
  }
  rec.value = forward(kind, rec);
  if (!rec.value.all_finite())
    throw NonFiniteError(std::string("non-finite value out of ") + op_name(kind));

  Tensor out = rec.value;
  out.node = static_cast<int>(nodes_.size());
  out.tape_id = id_;
  nodes_.push_back(std::move(rec));
  return out;
}

Tensor Tape::forward(Op kind, const NodeRec& n) const {
  const auto arity = [&](size_t want) {
    require(n.inputs.size() == want, kind,
            "expected " + std::to_string(want) + " inputs, got " + std::to_string(n.inputs.size()));
  };
  switch (kind) {
    case Op::matmul: {
      arity(2);
      const bool ta = n.a0 != 0, tb = n.a1 != 0;
      const Tensor& a = in_value(n, 0);
      const Tensor& b = in_value(n, 1);
      const int m = ta ? a.cols() : a.rows();
      const int kk = ta ? a.rows() : a.cols();
      const int kb = tb ? b.cols() : b.rows();
      const int nn = tb ? b.rows() : b.cols();
      require(kk == kb, kind, std::string("lhs ") + (ta ? "^T " : "") + a.shape_str() +
                                  " incompatible with rhs " + (tb ? "^T " : "") + b.shape_str());
      Tensor y(m, nn);
      kernels::gemm(ta, tb, m, nn, kk, a.data(), b.data(), y.data(), false);
      return y;
    }
    case Op::add:
    case Op::sub:
    case Op::hadamard: {
      arity(2);
      const Tensor& a = in_value(n, 0);
      const Tensor& b = in_value(n, 1);
      require(a.same_shape(b), kind, a.shape_str() + " vs " + b.shape_str());
      Tensor y(a.rows(), a.cols());
      if (kind == Op::add)
        kernels::vadd(a.size(), a.data(), b.data(), y.data());
      else if (kind == Op::sub)
        kernels::vsub(a.size(), a.data(), b.data(), y.data());
      else
        kernels::vmul(a.size(), a.data(), b.data(), y.data());
      return y;
    }
    case Op::scalar_mul: {
      arity(2);
      const Tensor& s = in_value(n, 0);
      const Tensor& a = in_value(n, 1);
      require(s.size() == 1, kind, "scalar must be 1x1, got " + s.shape_str());
      Tensor y(a.rows(), a.cols());
      kernels::vscale(a.size(), s[0], a.data(), y.data());
      return y;
    }
    case Op::concat_rows: {
      require(!n.inputs.empty(), kind, "needs at least one input");
      const int cols = in_value(n, 0).cols();
      int rows = 0;
      for (size_t i = 0; i < n.inputs.size(); ++i) {
        const Tensor& p = in_value(n, i);
        require(p.cols() == cols, kind,
                "column mismatch: " + p.shape_str() + " vs " + std::to_string(cols) + " cols");
        rows += p.rows();
      }
      Tensor y(rows, cols);
      double* dst = y.data();
      for (size_t i = 0; i < n.inputs.size(); ++i) {
        const Tensor& p = in_value(n, i);
        std::copy(p.data(), p.data() + p.size(), dst);
        dst += p.size();
      }
      return y;
    }
    case Op::slice: {
      arity(1);
      const Tensor& a = in_value(n, 0);
      require(n.a0 >= 0 && n.a1 >= 1 && n.a0 + n.a1 <= a.rows(), kind,
              "rows [" + std::to_string(n.a0) + ", " + std::to_string(n.a0 + n.a1) +
                  ") out of range for " + a.shape_str());
      Tensor y(n.a1, a.cols());
      std::copy(a.data() + static_cast<size_t>(n.a0) * a.cols(),
                a.data() + static_cast<size_t>(n.a0 + n.a1) * a.cols(), y.data());
      return y;
    }
    case Op::tanh:
    case Op::logistic_sigmoid:
    case Op::softplus:
    case Op::exp:
    case Op::log: {
      arity(1);
      const Tensor& a = in_value(n, 0);
      Tensor y(a.rows(), a.cols());
      switch (kind) {
        case Op::tanh: kernels::vtanh(a.size(), a.data(), y.data()); break;
        case Op::logistic_sigmoid: kernels::vsigmoid(a.size(), a.data(), y.data()); break;
        case Op::softplus: kernels::vsoftplus(a.size(), a.data(), y.data()); break;
        case Op::exp: kernels::vexp(a.size(), a.data(), y.data()); break;
        default: kernels::vlog(a.size(), a.data(), y.data()); break;
      }
      return y;
    }
    case Op::softmax_over_vector: {
      arity(1);
      const Tensor& a = in_value(n, 0);
      require(a.cols() == 1, kind, "expects a column vector, got " + a.shape_str());
      Tensor y(a.rows(), 1);
      kernels::softmax(a.rows(), a.data(), y.data());
      return y;
    }
    case Op::power: {
      arity(2);
      const Tensor& a = in_value(n, 0);
      const Tensor& e = in_value(n, 1);
      require(e.size() == 1, kind, "exponent must be 1x1, got " + e.shape_str());
      Tensor y(a.rows(), a.cols());
      kernels::vpow(a.size(), a.data(), e[0], y.data());
      return y;
    }
    case Op::cosine_similarity_rowwise: {
      arity(2);
      const Tensor& m = in_value(n, 0);
      const Tensor& k = in_value(n, 1);
      require(k.cols() == 1 && k.rows() == m.cols(), kind,
              "memory " + m.shape_str() + " vs key " + k.shape_str());
      Tensor y(m.rows(), 1);
      kernels::cosine_rows(m.rows(), m.cols(), m.data(), k.data(), y.data(), kCosineEps);
      return y;
    }
    case Op::sum:
    case Op::mean: {
      arity(1);
      const Tensor& a = in_value(n, 0);
      Tensor y(1, 1);
      y[0] = kernels::sum(a.size(), a.data());
      if (kind == Op::mean) y[0] /= a.size();
      return y;
    }
    case Op::circular_convolution_1d: {
      arity(2);
      const Tensor& w = in_value(n, 0);
      const Tensor& s = in_value(n, 1);
      require(w.cols() == 1 && s.cols() == 1, kind,
              "expects column vectors, got " + w.shape_str() + " and " + s.shape_str());
      require(s.rows() % 2 == 1, kind, "shift vector length must be odd, got " + s.shape_str());
      const int N = w.rows();
      const int half = (s.rows() - 1) / 2;
      Tensor y(N, 1);
      for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int o = -half; o <= half; ++o) acc += w[mod(i - o, N)] * s[o + half];
        y[i] = acc;
      }
      return y;
    }
    case Op::outer_product: {
      arity(2);
      const Tensor& a = in_value(n, 0);
      const Tensor& b = in_value(n, 1);
      require(a.cols() == 1 && b.cols() == 1, kind,
              "expects column vectors, got " + a.shape_str() + " and " + b.shape_str());
      Tensor y(a.rows(), b.rows());
      kernels::outer(a.rows(), b.rows(), a.data(), b.data(), y.data(), false);
      return y;
    }
    case Op::cumulative_product_exclusive: {
      arity(1);
      const Tensor& a = in_value(n, 0);
      require(a.cols() == 1, kind, "expects a column vector, got " + a.shape_str());
      Tensor y(a.rows(), 1);
      double run = 1.0;
      for (int i = 0; i < a.rows(); ++i) {
        y[i] = run;
        run *= a[i];
      }
      return y;
    }
    case Op::leaf: break;
  }
  throw std::invalid_argument("unhandled op");
}

void Tape::backward(const Tensor& loss) {
  if (loss.node < 0 || loss.tape_id != id_)
    throw std::invalid_argument("backward: loss is not a recorded node of this tape");
  if (loss.rows() != 1 || loss.cols() != 1)
    throw std::invalid_argument("backward: loss must be scalar (1x1), got " + loss.shape_str());

  for (auto& rec : nodes_) rec.grad = Tensor();
  grad_buffer(loss.node)[0] = 1.0;

  for (int id = loss.node; id >= 0; --id) {
    NodeRec& rec = nodes_[id];
    if (rec.grad.size() == 0) continue;
    if (rec.kind == Op::leaf) {
      if (rec.sink)
        kernels::vaxpy(rec.grad.size(), 1.0, rec.grad.data(), rec.sink->grad.data());
      continue;
    }
    backward_node(id);
  }
}

void Tape::backward_node(int id) {
  NodeRec& rec = nodes_[id];
  const Tensor& G = rec.grad;
  const Tensor& Y = rec.value;
  // Lazily-created buffers; null when the input is a constant.
  auto gbuf = [&](size_t i) -> double* {
    const InputRef& ref = rec.inputs[i];
    if (ref.node < 0) return nullptr;
    return grad_buffer(ref.node).data();
  };

  switch (rec.kind) {
    case Op::matmul: {
      const bool ta = rec.a0 != 0, tb = rec.a1 != 0;
      const Tensor& a = in_value(rec, 0);
      const Tensor& b = in_value(rec, 1);
      const int m = Y.rows(), n = Y.cols();
      if (double* da = gbuf(0)) {
        if (!ta)
          kernels::gemm(false, !tb, a.rows(), a.cols(), n, G.data(), b.data(), da, true);
        else if (!tb)  // dA = B * G^T
          kernels::gemm(false, true, a.rows(), a.cols(), n, b.data(), G.data(), da, true);
        else  // dA = B^T * G^T
          kernels::gemm(true, true, a.rows(), a.cols(), n, b.data(), G.data(), da, true);
      }
      if (double* db = gbuf(1)) {
        if (!tb)
          kernels::gemm(!ta, false, b.rows(), b.cols(), m, a.data(), G.data(), db, true);
        else if (!ta)  // dB = G^T * A
          kernels::gemm(true, false, b.rows(), b.cols(), m, G.data(), a.data(), db, true);
        else  // dB = G^T * A^T
          kernels::gemm(true, true, b.rows(), b.cols(), m, G.data(), a.data(), db, true);
      }
      break;
    }
    case Op::add: {
      if (double* da = gbuf(0)) kernels::vaxpy(G.size(), 1.0, G.data(), da);
      if (double* db = gbuf(1)) kernels::vaxpy(G.size(), 1.0, G.data(), db);
      break;
    }
    case Op::sub: {
      if (double* da = gbuf(0)) kernels::vaxpy(G.size(), 1.0, G.data(), da);
      if (double* db = gbuf(1)) kernels::vaxpy(G.size(), -1.0, G.data(), db);
      break;
    }
    case Op::hadamard: {
      const Tensor& a = in_value(rec, 0);
      const Tensor& b = in_value(rec, 1);
      if (double* da = gbuf(0)) kernels::vmuladd(G.size(), G.data(), b.data(), da);
      if (double* db = gbuf(1)) kernels::vmuladd(G.size(), G.data(), a.data(), db);
      break;
    }
    case Op::scalar_mul: {
      const Tensor& s = in_value(rec, 0);
      const Tensor& a = in_value(rec, 1);
      if (double* ds = gbuf(0)) ds[0] += kernels::dot(G.size(), G.data(), a.data());
      if (double* da = gbuf(1)) kernels::vaxpy(G.size(), s[0], G.data(), da);
      break;
    }
    case Op::concat_rows: {
      const double* g = G.data();
      for (size_t i = 0; i < rec.inputs.size(); ++i) {
        const Tensor& p = in_value(rec, i);
        if (double* dp = gbuf(i)) kernels::vaxpy(p.size(), 1.0, g, dp);
        g += p.size();
      }
      break;
    }
    case Op::slice: {
      const Tensor& a = in_value(rec, 0);
      if (double* da = gbuf(0))
        kernels::vaxpy(G.size(), 1.0, G.data(), da + static_cast<size_t>(rec.a0) * a.cols());
      break;
    }
    case Op::tanh: {
      if (double* da = gbuf(0))
        for (int i = 0; i < G.size(); ++i) da[i] += G[i] * (1.0 - Y[i] * Y[i]);
      break;
    }
    case Op::logistic_sigmoid: {
      if (double* da = gbuf(0))
        for (int i = 0; i < G.size(); ++i) da[i] += G[i] * Y[i] * (1.0 - Y[i]);
      break;
    }
    case Op::softplus: {
      const Tensor& a = in_value(rec, 0);
      if (double* da = gbuf(0))
        for (int i = 0; i < G.size(); ++i) da[i] += G[i] * kernels::sigmoid_scalar(a[i]);
      break;
    }
    case Op::softmax_over_vector: {
      if (double* da = gbuf(0)) {
        const double s = kernels::dot(G.size(), G.data(), Y.data());
        for (int i = 0; i < G.size(); ++i) da[i] += Y[i] * (G[i] - s);
      }
      break;
    }
    case Op::exp: {
      if (double* da = gbuf(0)) kernels::vmuladd(G.size(), G.data(), Y.data(), da);
      break;
    }
    case Op::log: {
      const Tensor& a = in_value(rec, 0);
      if (double* da = gbuf(0))
        for (int i = 0; i < G.size(); ++i) da[i] += G[i] / a[i];
      break;
    }
    case Op::power: {
      const Tensor& a = in_value(rec, 0);
      const Tensor& e = in_value(rec, 1);
      const double ev = e[0];
      if (double* da = gbuf(0))
        for (int i = 0; i < G.size(); ++i) {
          const double d = ev * std::pow(a[i], ev - 1.0);
          if (std::isfinite(d)) da[i] += G[i] * d;
        }
      if (double* de = gbuf(1)) {
        double acc = 0.0;
        for (int i = 0; i < G.size(); ++i)
          if (a[i] > 0.0) acc += G[i] * Y[i] * std::log(a[i]);
        de[0] += acc;
      }
      break;
    }
    case Op::cosine_similarity_rowwise: {
      const Tensor& m = in_value(rec, 0);
      const Tensor& k = in_value(rec, 1);
      if (double* dm = gbuf(0))
        kernels::cosine_rows_bwd_dm(m.rows(), m.cols(), m.data(), k.data(), G.data(), dm,
                                    kCosineEps);
      if (double* dk = gbuf(1))
        kernels::cosine_rows_bwd_dk(m.rows(), m.cols(), m.data(), k.data(), G.data(), dk,
                                    kCosineEps);
      break;
    }
    case Op::sum: {
      const Tensor& a = in_value(rec, 0);
      if (double* da = gbuf(0)) {
        const double g = G[0];
        for (int i = 0; i < a.size(); ++i) da[i] += g;
      }
      break;
    }
    case Op::mean: {
      const Tensor& a = in_value(rec, 0);
      if (double* da = gbuf(0)) {
        const double g = G[0] / a.size();
        for (int i = 0; i < a.size(); ++i) da[i] += g;
      }
      break;
    }
    case Op::circular_convolution_1d: {
      const Tensor& w = in_value(rec, 0);
      const Tensor& s = in_value(rec, 1);
      const int N = w.rows();
      const int half = (s.rows() - 1) / 2;
      double* dw = gbuf(0);
      double* ds = gbuf(1);
      for (int i = 0; i < N; ++i) {
        const double g = G[i];
        if (g == 0.0) continue;
        for (int o = -half; o <= half; ++o) {
          const int j = mod(i - o, N);
          if (dw) dw[j] += g * s[o + half];
          if (ds) ds[o + half] += g * w[j];
        }
      }
      break;
    }
    case Op::outer_product: {
      const Tensor& a = in_value(rec, 0);
      const Tensor& b = in_value(rec, 1);
      if (double* da = gbuf(0))
        kernels::gemm(false, false, a.rows(), 1, b.rows(), G.data(), b.data(), da, true);
      if (double* db = gbuf(1))
        kernels::gemm(true, false, b.rows(), 1, a.rows(), G.data(), a.data(), db, true);
      break;
    }
    case Op::cumulative_product_exclusive: {
      const Tensor& v = in_value(rec, 0);
      if (double* dv = gbuf(0)) {
        const int n = v.rows();
        // dv[j] = Y[j] * S[j] with S[j] = g[j+1] + v[j+1]*S[j+1].
        double S = 0.0;
        for (int j = n - 2; j >= 0; --j) {
          S = G[j + 1] + v[j + 1] * S;
          dv[j] += Y[j] * S;
        }
      }
      break;
    }
    case Op::leaf:
      break;
  }
}

Tensor Tape::grad(const Tensor& of) const {
  if (of.node < 0 || of.tape_id != id_)
    throw std::invalid_argument("grad: tensor is not a recorded node of this tape");
  const NodeRec& rec = nodes_[of.node];
  if (rec.grad.size() == 0) return Tensor::zeros(rec.value.rows(), rec.value.cols());
  return rec.grad;
}

void Tape::clear() {
  nodes_.clear();
  id_ = g_tape_counter.fetch_add(1);
}

namespace ops {

Tensor matmul(Tape& t, const Tensor& a, const Tensor& b, bool ta, bool tb) {
  return t.apply(Op::matmul, {a, b}, ta ? 1 : 0, tb ? 1 : 0);
}
Tensor add(Tape& t, const Tensor& a, const Tensor& b) { return t.apply(Op::add, {a, b}); }
Tensor sub(Tape& t, const Tensor& a, const Tensor& b) { return t.apply(Op::sub, {a, b}); }
Tensor hadamard(Tape& t, const Tensor& a, const Tensor& b) {
  return t.apply(Op::hadamard, {a, b});
}
Tensor scalar_mul(Tape& t, const Tensor& s, const Tensor& a) {
  return t.apply(Op::scalar_mul, {s, a});
}
Tensor concat_rows(Tape& t, const std::vector<Tensor>& parts) {
  return t.apply(Op::concat_rows, parts);
}
Tensor slice_rows(Tape& t, const Tensor& a, int start, int count) {
  return t.apply(Op::slice, {a}, start, count);
}
Tensor tanh(Tape& t, const Tensor& a) { return t.apply(Op::tanh, {a}); }
Tensor sigmoid(Tape& t, const Tensor& a) { return t.apply(Op::logistic_sigmoid, {a}); }
Tensor softplus(Tape& t, const Tensor& a) { return t.apply(Op::softplus, {a}); }
Tensor softmax(Tape& t, const Tensor& a) { return t.apply(Op::softmax_over_vector, {a}); }
Tensor exp(Tape& t, const Tensor& a) { return t.apply(Op::exp, {a}); }
Tensor log(Tape& t, const Tensor& a) { return t.apply(Op::log, {a}); }
Tensor power(Tape& t, const Tensor& base, const Tensor& expo) {
  return t.apply(Op::power, {base, expo});
}
Tensor cosine_rows(Tape& t, const Tensor& m, const Tensor& k) {
  return t.apply(Op::cosine_similarity_rowwise, {m, k});
}
Tensor sum(Tape& t, const Tensor& a) { return t.apply(Op::sum, {a}); }
Tensor mean(Tape& t, const Tensor& a) { return t.apply(Op::mean, {a}); }
Tensor circular_conv(Tape& t, const Tensor& w, const Tensor& s) {
  return t.apply(Op::circular_convolution_1d, {w, s});
}
Tensor outer(Tape& t, const Tensor& a, const Tensor& b) {
  return t.apply(Op::outer_product, {a, b});
}
Tensor cumprod_exclusive(Tape& t, const Tensor& a) {
  return t.apply(Op::cumulative_product_exclusive, {a});
}

Tensor permute_rows(Tape& t, const Tensor& a, const std::vector<int>& order) {
  std::vector<Tensor> rows;
  rows.reserve(order.size());
  for (int idx : order) rows.push_back(slice_rows(t, a, idx, 1));
  return concat_rows(t, rows);
}

Tensor affine(Tape& t, const Tensor& w, const Tensor& x, const Tensor& b) {
  return add(t, matmul(t, w, x), b);
}

}  // namespace ops

}  // namespace mann
