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

#include "mann/kernels.hpp"

#include <atomic>
#include <cmath>

namespace mann::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// One output row of Y = op(A)*op(B); the accumulation order over l is the
// same no matter which thread owns the row.
inline void gemm_row(bool ta, bool tb, int i, int m, int n, int k, const double* A,
                     const double* B, double* Y, bool acc) {
  double* y = Y + static_cast<size_t>(i) * n;
  if (!acc)
    for (int j = 0; j < n; ++j) y[j] = 0.0;
  if (!ta && !tb) {
    const double* a = A + static_cast<size_t>(i) * k;
    for (int l = 0; l < k; ++l) {
      const double ail = a[l];
      if (ail == 0.0) continue;
      const double* b = B + static_cast<size_t>(l) * n;
      for (int j = 0; j < n; ++j) y[j] += ail * b[j];
    }
  } else if (!ta && tb) {
    const double* a = A + static_cast<size_t>(i) * k;
    for (int j = 0; j < n; ++j) {
      const double* b = B + static_cast<size_t>(j) * k;
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += a[l] * b[l];
      y[j] += s;
    }
  } else if (ta && !tb) {
    for (int l = 0; l < k; ++l) {
      const double ail = A[static_cast<size_t>(l) * m + i];
      if (ail == 0.0) continue;
      const double* b = B + static_cast<size_t>(l) * n;
      for (int j = 0; j < n; ++j) y[j] += ail * b[j];
    }
  } else {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += A[static_cast<size_t>(l) * m + i] * B[static_cast<size_t>(j) * k + l];
      y[j] += s;
    }
  }
}

inline double tanh_scalar(double x) { return std::tanh(x); }
inline double exp_scalar(double x) { return std::exp(x); }
inline double log_scalar(double x) { return std::log(x); }

inline void cosine_row(int W, const double* mrow, const double* k, double knorm, double eps,
                       double* out) {
  double d = 0.0, mm = 0.0;
  for (int w = 0; w < W; ++w) {
    d += mrow[w] * k[w];
    mm += mrow[w] * mrow[w];
  }
  *out = d / (std::sqrt(mm) * knorm + eps);
}

inline void cosine_row_bwd_dm(int W, const double* mrow, const double* k, double knorm,
                              double g, double eps, double* dmrow) {
  double d = 0.0, mm = 0.0;
  for (int w = 0; w < W; ++w) {
    d += mrow[w] * k[w];
    mm += mrow[w] * mrow[w];
  }
  const double mnorm = std::sqrt(mm);
  const double denom = mnorm * knorm + eps;
  const double inv = 1.0 / denom;
  // d s/d m = k/denom - s * knorm * m/(mnorm * denom); second term -> 0 with m.
  double coef = 0.0;
  if (mnorm > 0.0) coef = d * inv * inv * knorm / mnorm;
  for (int w = 0; w < W; ++w) dmrow[w] += g * (k[w] * inv - coef * mrow[w]);
}

}  // namespace

void set_parallel(bool enabled) { g_parallel.store(enabled, std::memory_order_relaxed); }
bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

namespace serial {

void gemm(bool ta, bool tb, int m, int n, int k, const double* A, const double* B, double* Y,
          bool acc) {
  for (int i = 0; i < m; ++i) gemm_row(ta, tb, i, m, n, k, A, B, Y, acc);
}

void vadd(int n, const double* a, const double* b, double* y) {
  for (int i = 0; i < n; ++i) y[i] = a[i] + b[i];
}
void vsub(int n, const double* a, const double* b, double* y) {
  for (int i = 0; i < n; ++i) y[i] = a[i] - b[i];
}
void vmul(int n, const double* a, const double* b, double* y) {
  for (int i = 0; i < n; ++i) y[i] = a[i] * b[i];
}
void vmuladd(int n, const double* a, const double* b, double* y) {
  for (int i = 0; i < n; ++i) y[i] += a[i] * b[i];
}
void vscale(int n, double alpha, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] = alpha * x[i];
}
void vaxpy(int n, double alpha, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}
void vtanh(int n, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] = tanh_scalar(x[i]);
}
void vsigmoid(int n, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] = sigmoid_scalar(x[i]);
}
void vsoftplus(int n, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] = softplus_scalar(x[i]);
}
void vexp(int n, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] = exp_scalar(x[i]);
}
void vlog(int n, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] = log_scalar(x[i]);
}
void vpow(int n, const double* x, double e, double* y) {
  for (int i = 0; i < n; ++i) y[i] = std::pow(x[i], e);
}

void cosine_rows(int N, int W, const double* M, const double* k, double* out, double eps) {
  double kk = 0.0;
  for (int w = 0; w < W; ++w) kk += k[w] * k[w];
  const double knorm = std::sqrt(kk);
  for (int i = 0; i < N; ++i)
    cosine_row(W, M + static_cast<size_t>(i) * W, k, knorm, eps, out + i);
}

void cosine_rows_bwd_dm(int N, int W, const double* M, const double* k, const double* g,
                        double* dM, double eps) {
  double kk = 0.0;
  for (int w = 0; w < W; ++w) kk += k[w] * k[w];
  const double knorm = std::sqrt(kk);
  for (int i = 0; i < N; ++i)
    cosine_row_bwd_dm(W, M + static_cast<size_t>(i) * W, k, knorm, g[i], eps,
                      dM + static_cast<size_t>(i) * W);
}

void outer(int m, int n, const double* a, const double* b, double* Y, bool acc) {
  for (int i = 0; i < m; ++i) {
    double* y = Y + static_cast<size_t>(i) * n;
    const double ai = a[i];
    if (acc)
      for (int j = 0; j < n; ++j) y[j] += ai * b[j];
    else
      for (int j = 0; j < n; ++j) y[j] = ai * b[j];
  }
}

}  // namespace serial

void gemm(bool ta, bool tb, int m, int n, int k, const double* A, const double* B, double* Y,
          bool acc) {
  const long work = static_cast<long>(m) * n * k;
  if (parallel_enabled() && work >= kGrain && m > 1) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) gemm_row(ta, tb, i, m, n, k, A, B, Y, acc);
  } else {
    serial::gemm(ta, tb, m, n, k, A, B, Y, acc);
  }
}

#define MANN_MAP_DISPATCH(name, ...)                \
  if (parallel_enabled() && n >= kGrain) {          \
    _Pragma("omp parallel for schedule(static)")    \
    for (int i = 0; i < n; ++i) __VA_ARGS__;        \
  } else {                                          \
    serial::name;                                   \
  }

void vadd(int n, const double* a, const double* b, double* y) {
  MANN_MAP_DISPATCH(vadd(n, a, b, y), y[i] = a[i] + b[i])
}
void vsub(int n, const double* a, const double* b, double* y) {
  MANN_MAP_DISPATCH(vsub(n, a, b, y), y[i] = a[i] - b[i])
}
void vmul(int n, const double* a, const double* b, double* y) {
  MANN_MAP_DISPATCH(vmul(n, a, b, y), y[i] = a[i] * b[i])
}
void vmuladd(int n, const double* a, const double* b, double* y) {
  MANN_MAP_DISPATCH(vmuladd(n, a, b, y), y[i] += a[i] * b[i])
}
void vscale(int n, double alpha, const double* x, double* y) {
  MANN_MAP_DISPATCH(vscale(n, alpha, x, y), y[i] = alpha * x[i])
}
void vaxpy(int n, double alpha, const double* x, double* y) {
  MANN_MAP_DISPATCH(vaxpy(n, alpha, x, y), y[i] += alpha * x[i])
}
void vtanh(int n, const double* x, double* y) {
  MANN_MAP_DISPATCH(vtanh(n, x, y), y[i] = tanh_scalar(x[i]))
}
void vsigmoid(int n, const double* x, double* y) {
  MANN_MAP_DISPATCH(vsigmoid(n, x, y), y[i] = sigmoid_scalar(x[i]))
}
void vsoftplus(int n, const double* x, double* y) {
  MANN_MAP_DISPATCH(vsoftplus(n, x, y), y[i] = softplus_scalar(x[i]))
}
void vexp(int n, const double* x, double* y) {
  MANN_MAP_DISPATCH(vexp(n, x, y), y[i] = exp_scalar(x[i]))
}
void vlog(int n, const double* x, double* y) {
  MANN_MAP_DISPATCH(vlog(n, x, y), y[i] = log_scalar(x[i]))
}
void vpow(int n, const double* x, double e, double* y) {
  MANN_MAP_DISPATCH(vpow(n, x, e, y), y[i] = std::pow(x[i], e))
}

#undef MANN_MAP_DISPATCH

void cosine_rows(int N, int W, const double* M, const double* k, double* out, double eps) {
  const long work = static_cast<long>(N) * W;
  if (parallel_enabled() && work >= kGrain && N > 1) {
    double kk = 0.0;
    for (int w = 0; w < W; ++w) kk += k[w] * k[w];
    const double knorm = std::sqrt(kk);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i)
      cosine_row(W, M + static_cast<size_t>(i) * W, k, knorm, eps, out + i);
  } else {
    serial::cosine_rows(N, W, M, k, out, eps);
  }
}

void cosine_rows_bwd_dm(int N, int W, const double* M, const double* k, const double* g,
                        double* dM, double eps) {
  const long work = static_cast<long>(N) * W;
  if (parallel_enabled() && work >= kGrain && N > 1) {
    double kk = 0.0;
    for (int w = 0; w < W; ++w) kk += k[w] * k[w];
    const double knorm = std::sqrt(kk);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i)
      cosine_row_bwd_dm(W, M + static_cast<size_t>(i) * W, k, knorm, g[i], eps,
                        dM + static_cast<size_t>(i) * W);
  } else {
    serial::cosine_rows_bwd_dm(N, W, M, k, g, dM, eps);
  }
}

void outer(int m, int n, const double* a, const double* b, double* Y, bool acc) {
  const long work = static_cast<long>(m) * n;
  if (parallel_enabled() && work >= kGrain && m > 1) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
      double* y = Y + static_cast<size_t>(i) * n;
      const double ai = a[i];
      if (acc)
        for (int j = 0; j < n; ++j) y[j] += ai * b[j];
      else
        for (int j = 0; j < n; ++j) y[j] = ai * b[j];
    }
  } else {
    serial::outer(m, n, a, b, Y, acc);
  }
}

double sum(int n, const double* x) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot(int n, const double* a, const double* b) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sumsq(int n, const double* x) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void cosine_rows_bwd_dk(int N, int W, const double* M, const double* k, const double* g,
                        double* dk, double eps) {
  double kk = 0.0;
  for (int w = 0; w < W; ++w) kk += k[w] * k[w];
  const double knorm = std::sqrt(kk);
  for (int i = 0; i < N; ++i) {
    const double* mrow = M + static_cast<size_t>(i) * W;
    double d = 0.0, mm = 0.0;
    for (int w = 0; w < W; ++w) {
      d += mrow[w] * k[w];
      mm += mrow[w] * mrow[w];
    }
    const double mnorm = std::sqrt(mm);
    const double inv = 1.0 / (mnorm * knorm + eps);
    double coef = 0.0;
    if (knorm > 0.0) coef = d * inv * inv * mnorm / knorm;
    const double gi = g[i];
    for (int w = 0; w < W; ++w) dk[w] += gi * (mrow[w] * inv - coef * k[w]);
  }
}

void softmax(int n, const double* x, double* y) {
  double m = x[0];
  for (int i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    y[i] = std::exp(x[i] - m);
    z += y[i];
  }
  const double inv = 1.0 / z;
  for (int i = 0; i < n; ++i) y[i] *= inv;
}

double sigmoid_scalar(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus_scalar(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

}  // namespace mann::kernels
