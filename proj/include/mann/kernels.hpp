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

#include <cstddef>

// Dense numeric kernels behind the tape primitives. Every parallel kernel
// partitions work by output element and keeps the per-element accumulation
// order identical to the serial reference, so results are bit-identical for
// any thread count. Reductions that fold across the whole buffer (sum, dot,
// norms, softmax normalization) stay serial to pin their accumulation order.
//
// kernels::serial::* are the reference implementations; the unqualified
// entry points dispatch to OpenMP when the work is large enough and
// parallelism is enabled. tests/test_kernels.cpp asserts bit-equality and
// bench/kernels_bench.cpp measures the difference.

namespace mann::kernels {

void set_parallel(bool enabled);
bool parallel_enabled();

// Minimum scalar operations before a kernel goes parallel.
inline constexpr long kGrain = 32768;

namespace serial {

// Y(m x n) = op(A) * op(B) (+= if acc); op transposes when ta/tb set.
// A is m x k (or k x m if ta), B is k x n (or n x k if tb), row-major.
void gemm(bool ta, bool tb, int m, int n, int k, const double* A, const double* B, double* Y,
          bool acc);

void vadd(int n, const double* a, const double* b, double* y);
void vsub(int n, const double* a, const double* b, double* y);
void vmul(int n, const double* a, const double* b, double* y);
void vmuladd(int n, const double* a, const double* b, double* y);  // y += a.*b
void vscale(int n, double alpha, const double* x, double* y);      // y = alpha*x
void vaxpy(int n, double alpha, const double* x, double* y);       // y += alpha*x

void vtanh(int n, const double* x, double* y);
void vsigmoid(int n, const double* x, double* y);
void vsoftplus(int n, const double* x, double* y);
void vexp(int n, const double* x, double* y);
void vlog(int n, const double* x, double* y);
void vpow(int n, const double* x, double e, double* y);

// out[i] = dot(M[i], k) / (|M[i]||k| + eps), M is N x W.
void cosine_rows(int N, int W, const double* M, const double* k, double* out, double eps);
// dM[i] += g[i] * d out[i]/d M[i]; rows are independent.
void cosine_rows_bwd_dm(int N, int W, const double* M, const double* k, const double* g,
                        double* dM, double eps);

// Y(m x n) (+)= a * b^T for column vectors a (m) and b (n).
void outer(int m, int n, const double* a, const double* b, double* Y, bool acc);

}  // namespace serial

// Dispatching entry points (OpenMP above kGrain, serial reference below).
void gemm(bool ta, bool tb, int m, int n, int k, const double* A, const double* B, double* Y,
          bool acc);
void vadd(int n, const double* a, const double* b, double* y);
void vsub(int n, const double* a, const double* b, double* y);
void vmul(int n, const double* a, const double* b, double* y);
void vmuladd(int n, const double* a, const double* b, double* y);
void vscale(int n, double alpha, const double* x, double* y);
void vaxpy(int n, double alpha, const double* x, double* y);
void vtanh(int n, const double* x, double* y);
void vsigmoid(int n, const double* x, double* y);
void vsoftplus(int n, const double* x, double* y);
void vexp(int n, const double* x, double* y);
void vlog(int n, const double* x, double* y);
void vpow(int n, const double* x, double e, double* y);
void cosine_rows(int N, int W, const double* M, const double* k, double* out, double eps);
void cosine_rows_bwd_dm(int N, int W, const double* M, const double* k, const double* g,
                        double* dM, double eps);
void outer(int m, int n, const double* a, const double* b, double* Y, bool acc);

// Serial-only pieces (accumulation order is part of the contract).
double sum(int n, const double* x);
double dot(int n, const double* a, const double* b);
double sumsq(int n, const double* x);
// dk += sum_i g[i] * d out[i]/d k for the cosine kernel.
void cosine_rows_bwd_dk(int N, int W, const double* M, const double* k, const double* g,
                        double* dk, double eps);
void softmax(int n, const double* x, double* y);

// Scalar helpers shared with backward code.
double sigmoid_scalar(double x);
double softplus_scalar(double x);

}  // namespace mann::kernels
